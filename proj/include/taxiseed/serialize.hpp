#pragma once

// JSON views of the result types. Every big integer is a decimal string.

#include <string>

#include "json.hpp"

#include "taxiseed/arith.hpp"
#include "taxiseed/oracle.hpp"
#include "taxiseed/scan.hpp"
#include "taxiseed/witness.hpp"

namespace taxiseed {

using Json = nlohmann::ordered_json;

inline void to_json(Json& j, const SeedQuantities& q) {
    j = Json{{"m", q.m}, {"d", to_decimal(q.d)}, {"l3", to_decimal(q.l3)}, {"l4", to_decimal(q.l4)}};
}

inline void to_json(Json& j, const SeedReport& r) {
    j = Json{{"m", r.m},
             {"t", r.t},
             {"seed_number", to_decimal(r.seed_number)},
             {"seed_value", to_decimal(r.seed_value)},
             {"status", to_string(r.status)}};
    if (r.case_label)
        j["case_label"] = to_string(*r.case_label);
}

inline void to_json(Json& j, const Representation& r) { j = r.bases; }

inline void to_json(Json& j, const TaxicabResult& r) {
    j = Json{{"n", r.n},
             {"m", r.m},
             {"t", r.t},
             {"value", std::to_string(r.value)},
             {"search_ceiling", std::to_string(r.search_ceiling)},
             {"representations", r.representations}};
}

inline void to_json(Json& j, const DropReport& r) {
    Json seq = Json::array();
    for (const auto& [n, v] : r.taxicab_sequence)
        seq.push_back(Json{{"n", n}, {"value", std::to_string(v)}});
    j = Json{{"m", r.m},
             {"t", r.t},
             {"n0", r.n0},
             {"absent_below_limit", r.absent_below},
             {"taxicab_sequence", seq},
             {"drops", r.drops},
             {"empirical_seed", r.empirical_seed},
             {"seed_value", std::to_string(r.seed_value)},
             {"stabilization_window", r.stabilization_window},
             {"window_too_small", r.window_too_small}};
}

inline void to_json(Json& j, const WitnessSet& w) {
    Json sums = Json::array();
    for (const auto& s : w.sums) {
        Json terms = Json::array();
        for (const auto& term : s)
            terms.push_back(Json::array({term.base, to_decimal(term.count)}));
        sums.push_back(std::move(terms));
    }
    j = Json{{"m", w.m},
             {"t", w.t},
             {"kind", to_string(w.kind)},
             {"length", to_decimal(w.length)},
             {"common_value", to_decimal(w.common_value)},
             {"sums", std::move(sums)}};
}

/// Inverse of to_json(WitnessSet). Throws PreconditionViolation on a
/// malformed document.
inline WitnessSet witness_from_json(const Json& j) {
    try {
        WitnessSet w;
        w.m = j.at("m").get<unsigned>();
        w.t = j.at("t").get<unsigned>();
        const auto kind = parse_witness_kind(j.at("kind").get<std::string>());
        if (!kind)
            throw PreconditionViolation("unknown witness kind");
        w.kind = *kind;
        w.common_value = BigInt(j.at("common_value").get<std::string>());
        const auto& sums = j.at("sums");
        for (const auto& s : sums) {
            RunLengthSum sum;
            for (const auto& term : s)
                sum.push_back({term.at(0).get<std::uint64_t>(), BigInt(term.at(1).get<std::string>())});
            w.sums.push_back(std::move(sum));
        }
        if (j.contains("length"))
            w.length = BigInt(j.at("length").get<std::string>());
        else if (!w.sums.empty())
            w.length = term_count(w.sums.front());
        return w;
    } catch (const Json::exception& e) {
        throw PreconditionViolation(std::string("malformed witness JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw PreconditionViolation(std::string("malformed number in witness JSON: ") + e.what());
    }
}

inline void to_json(Json& j, const VerificationReport& r) {
    j = Json{{"ok", r.ok}, {"detail", r.detail}};
    if (r.sum_index)
        j["sum_index"] = *r.sum_index;
}

inline void to_json(Json& j, const ScanRecord& r) { j = Json::parse(to_jsonl_row(r)); }

} // namespace taxiseed
