#pragma once

// Command-line front end. stdout carries exactly one JSON envelope
//   {"command", "parameters", "result", "timing_ms"}
// (or raw CSV with --csv where offered); diagnostics go to stderr.
//
// Exit codes: 0 success, 1 not found within limit, 2 usage error,
// 3 internal-consistency error (including an oracle/formula disagreement
// reported by `verify`).

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "taxiseed/arith.hpp"
#include "taxiseed/errors.hpp"
#include "taxiseed/oracle.hpp"
#include "taxiseed/scan.hpp"
#include "taxiseed/serialize.hpp"
#include "taxiseed/witness.hpp"

namespace taxiseed::cli {

enum ExitCode : int { kOk = 0, kNotFound = 1, kUsage = 2, kInconsistent = 3 };

// Used by `taxicab` when no construction-backed default applies.
inline constexpr std::uint64_t kFallbackSearchLimit = 1'000'000;
// `verify` refuses formula values beyond this; the oracle is desk-scale.
inline constexpr std::uint64_t kVerifyValueCeiling = 10'000'000;

struct Outcome {
    Json result;
    int code = kOk;
    std::optional<std::string> raw; // replaces the envelope when set (--csv)
};

namespace detail {

inline Json seed_json(const SeedReport& r, const SeedQuantities& q) {
    Json j = r;
    j["d"] = to_decimal(q.d);
    j["l3"] = to_decimal(q.l3);
    j["l4"] = to_decimal(q.l4);
    return j;
}

inline Outcome verify(unsigned m, unsigned t, std::uint64_t window) {
    if (t != 2 && t != 3)
        throw PreconditionViolation("verify compares against exact formulas, which exist for t = 2 and t = 3 only");
    const SeedReport formula = t == 2 ? seed_two_ways(m) : seed_three_ways(m);
    if (formula.seed_value > kVerifyValueCeiling)
        throw PreconditionViolation("seed value " + to_decimal(formula.seed_value) +
                                    " is beyond the brute-force range");
    const auto seed = formula.seed_number.get_ui();
    const auto value = formula.seed_value.get_ui();

    // n0 <= seed because T(seed) <= value, so this range holds the last drop.
    const DropReport oracle = drops(m, t, seed + window, value + 1, window);
    const bool agree = oracle.empirical_seed == seed && oracle.seed_value == value;

    Outcome o;
    o.result = Json{{"m", m},
                    {"t", t},
                    {"formula", formula},
                    {"oracle", oracle},
                    {"agree", agree}};
    o.code = agree ? kOk : kInconsistent;
    return o;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized taxicab numbers and their seeds", "taxiseed"};
    app.require_subcommand(1);

    std::uint64_t n = 0, t64 = 0, limit = 0, n_max = 0, window = 3, v_limit = 10'000;
    unsigned m = 0, t = 0, workers = 1, m_max = 0, from = 0, to = 0;
    bool all_reps = false, conjecture = false, csv = false, resume = false;
    std::string kind_name, out_path, format = "csv";

    auto* taxicab_cmd = app.add_subcommand("taxicab", "least value with >= t representations as n m-th powers");
    taxicab_cmd->add_option("-n", n, "number of terms")->required()->check(CLI::PositiveNumber);
    taxicab_cmd->add_option("-m", m, "exponent")->required()->check(CLI::PositiveNumber);
    taxicab_cmd->add_option("-t", t64, "number of ways")->required()->check(CLI::PositiveNumber);
    auto* limit_opt = taxicab_cmd->add_option("--limit", limit, "exclusive search bound");
    taxicab_cmd->add_flag("--all-reps", all_reps, "list every representation of the winning value");

    auto* seed_cmd = app.add_subcommand("seed", "seed number and seed value");
    seed_cmd->add_option("-m", m, "exponent")->required()->check(CLI::PositiveNumber);
    seed_cmd->add_option("-t", t, "number of ways")->required()->check(CLI::Range(2u, 1u << 20));
    seed_cmd->add_flag("--conjecture", conjecture, "use the pair-value bound (any t)");

    auto* table_cmd = app.add_subcommand("table", "seed table for m = 1..K");
    table_cmd->add_option("-t", t, "number of ways")->required()->check(CLI::IsMember({2u, 3u}));
    table_cmd->add_option("--m-max", m_max, "largest exponent")->required()->check(CLI::PositiveNumber);
    table_cmd->add_flag("--csv", csv, "CSV instead of JSON");

    auto* drops_cmd = app.add_subcommand("drops", "drop set and empirical seed by exhaustive search");
    drops_cmd->add_option("-m", m, "exponent")->required()->check(CLI::PositiveNumber);
    drops_cmd->add_option("-t", t64, "number of ways")->required()->check(CLI::PositiveNumber);
    drops_cmd->add_option("--n-max", n_max, "largest n inspected for drops")->required()->check(CLI::PositiveNumber);
    drops_cmd->add_option("--window", window, "extra n verified past n-max")->check(CLI::PositiveNumber);
    drops_cmd->add_option("--v-limit", v_limit, "search bound for the first existing T")
        ->check(CLI::PositiveNumber);
    drops_cmd->add_option("--workers", workers, "parallel queries")->check(CLI::PositiveNumber);

    auto* construct_cmd = app.add_subcommand("construct", "build and verify an equal-sum witness");
    construct_cmd->add_option("-m", m, "exponent")->required()->check(CLI::PositiveNumber);
    construct_cmd->add_option("-t", t, "number of ways (lemma21, thm51)")->check(CLI::PositiveNumber);
    construct_cmd->add_option("--kind", kind_name, "lemma21|eq1|eq2|eq3|eq4|eq6|eq7|thm51")
        ->required()
        ->check(CLI::IsMember({"lemma21", "eq1", "eq2", "eq3", "eq4", "eq6", "eq7", "thm51"}));

    auto* scan_cmd = app.add_subcommand("scan", "classify seeds over a range of exponents");
    scan_cmd->add_option("--from", from, "first exponent")->required()->check(CLI::PositiveNumber);
    scan_cmd->add_option("--to", to, "last exponent")->required()->check(CLI::PositiveNumber);
    scan_cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    auto* out_opt = scan_cmd->add_option("--out", out_path, "write records to this file (with <out>.ckpt)");
    scan_cmd->add_flag("--resume", resume, "continue from <out>.ckpt when it matches")->needs(out_opt);
    scan_cmd->add_option("--format", format, "file format")->check(CLI::IsMember({"csv", "jsonl"}));
    scan_cmd->add_flag("--csv", csv, "CSV to stdout instead of JSON");

    auto* verify_cmd = app.add_subcommand("verify", "cross-check the exact seed formulas against exhaustive search");
    verify_cmd->add_option("-m", m, "exponent")->required()->check(CLI::PositiveNumber);
    verify_cmd->add_option("-t", t, "number of ways (2 or 3)")->required()->check(CLI::IsMember({2u, 3u}));
    verify_cmd->add_option("--window", window, "extra n verified past the seed")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "taxiseed: " << e.what() << '\n';
        return kUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    std::string command;
    Json params = Json::object();
    Outcome o;

    try {
        if (taxicab_cmd->parsed()) {
            command = "taxicab";
            std::optional<std::uint64_t> bound;
            if (limit_opt->count() > 0)
                bound = limit;
            else
                bound = default_search_limit(n, m, t64);
            if (!bound)
                bound = kFallbackSearchLimit;
            params = Json{{"n", n}, {"m", m}, {"t", t64}, {"limit", *bound}, {"all_reps", all_reps}};
            o.result = taxicab(n, m, t64, bound, all_reps ? RepsPolicy::all : RepsPolicy::first_t);
        } else if (seed_cmd->parsed()) {
            command = "seed";
            params = Json{{"m", m}, {"t", t}, {"conjecture", conjecture}};
            if (t >= 4 && !conjecture)
                throw PreconditionViolation("no exact formula for t >= 4; pass --conjecture for the upper bound");
            const SeedReport r = conjecture ? conjectured_seed(m, t) : t == 2 ? seed_two_ways(m) : seed_three_ways(m);
            o.result = detail::seed_json(r, seed_quantities(m));
            if (conjecture)
                o.result["no_large_part"] = no_large_part_predicate(m, t);
        } else if (table_cmd->parsed()) {
            command = "table";
            params = Json{{"t", t}, {"m_max", m_max}};
            Json rows = Json::array();
            std::string text = t == 2 ? "m,d,S,V\n" : "m,d,S,V,case\n";
            for (unsigned k = 1; k <= m_max; ++k) {
                const SeedQuantities q = seed_quantities(k);
                const SeedReport r = t == 2 ? seed_two_ways(k) : seed_three_ways(k);
                Json row{{"m", k},
                         {"d", to_decimal(q.d)},
                         {"seed_number", to_decimal(r.seed_number)},
                         {"seed_value", to_decimal(r.seed_value)}};
                text += std::to_string(k) + ',' + to_decimal(q.d) + ',' + to_decimal(r.seed_number) + ',' +
                        to_decimal(r.seed_value);
                if (r.case_label) {
                    row["case"] = to_string(*r.case_label);
                    text += ',' + std::string(to_string(*r.case_label));
                }
                text += '\n';
                rows.push_back(std::move(row));
            }
            o.result = Json{{"t", t}, {"rows", std::move(rows)}};
            if (csv)
                o.raw = std::move(text);
        } else if (drops_cmd->parsed()) {
            command = "drops";
            params = Json{{"m", m},         {"t", t64},         {"n_max", n_max},
                          {"window", window}, {"v_limit", v_limit}, {"workers", workers}};
            const DropReport r = drops(m, t64, n_max, v_limit, window, workers);
            if (r.window_too_small)
                err << "taxiseed: warning: n-max " << n_max << " < empirical seed " << r.empirical_seed
                    << " + window " << window << "; the seed may not be final\n";
            o.result = r;
        } else if (construct_cmd->parsed()) {
            command = "construct";
            const WitnessKind kind = *parse_witness_kind(kind_name);
            const bool needs_t = kind == WitnessKind::lemma21 || kind == WitnessKind::thm51;
            if (needs_t && t == 0)
                throw PreconditionViolation(kind_name + " needs -t");
            params = Json{{"m", m}, {"kind", kind_name}};
            if (needs_t)
                params["t"] = t;
            const WitnessSet w = kind == WitnessKind::lemma21 ? lemma21_construction(m, t)
                                 : kind == WitnessKind::thm51 ? thm51_construction(m, t)
                                                              : equation_witness(kind, m);
            const VerificationReport report = verify_witness(w);
            o.result = Json{{"witness", w}, {"verification", report}};
            if (!report)
                o.code = kInconsistent;
        } else if (scan_cmd->parsed()) {
            command = "scan";
            if (from > to)
                throw PreconditionViolation("--from must not exceed --to");
            params = Json{{"from", from}, {"to", to}, {"workers", workers}};
            const ScanOptions opt{from, to, workers};
            if (!out_path.empty()) {
                params["out"] = out_path;
                params["format"] = format;
                params["resume"] = resume;
                const auto fmt = format == "csv" ? ScanFormat::csv : ScanFormat::jsonl;
                const auto r = scan_to_file(opt, out_path, fmt, resume);
                o.result = Json{{"out", out_path},
                                {"checkpoint", checkpoint_path(out_path).string()},
                                {"resumed", r.resumed},
                                {"first_m_written", r.first_m_written},
                                {"records_written", r.records_written},
                                {"exceptions_written", r.exceptions}};
            } else if (csv) {
                std::string text(kScanCsvHeader);
                text += '\n';
                scan_range(opt, [&](const ScanRecord& r) {
                    text += to_csv_row(r);
                    text += '\n';
                });
                o.raw = std::move(text);
            } else {
                Json records = Json::array();
                std::vector<unsigned> exceptions;
                scan_range(opt, [&](const ScanRecord& r) {
                    records.push_back(r);
                    if (r.exceptional_two_way)
                        exceptions.push_back(r.m);
                });
                o.result = Json{{"records", std::move(records)}, {"exceptions", exceptions}};
            }
        } else if (verify_cmd->parsed()) {
            command = "verify";
            params = Json{{"m", m}, {"t", t}, {"window", window}};
            o = detail::verify(m, t, window);
            if (o.code != kOk)
                err << "taxiseed: exhaustive search disagrees with the closed form at m=" << m << ", t=" << t
                    << '\n';
        }
    } catch (const NotFoundWithinLimit& e) {
        err << "taxiseed: " << e.what() << '\n';
        return kNotFound;
    } catch (const InternalConsistencyError& e) {
        err << "taxiseed: internal consistency error: " << e.what() << '\n';
        return kInconsistent;
    } catch (const ArithmeticOverflow& e) {
        err << "taxiseed: " << e.what() << " (input beyond the 64-bit search range)\n";
        return kUsage;
    } catch (const PreconditionViolation& e) {
        err << "taxiseed: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "taxiseed: " << e.what() << '\n';
        return kNotFound;
    }

    if (o.raw) {
        out << *o.raw;
        return o.code;
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    Json envelope{{"command", command}, {"parameters", params}, {"result", o.result}, {"timing_ms", elapsed.count()}};
    out << envelope.dump(2) << '\n';
    return o.code;
}

} // namespace taxiseed::cli
