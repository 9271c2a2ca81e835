#pragma once

// Range scan over exponents m: per-m seed classification, exceptional
// exponents, ordered output with checkpoint/resume.
//
// Work is split into contiguous m-blocks. Inside a block 3^m and 2^m are
// carried forward by multiplication and d is taken as gcd(3^m - 1, 2^m - 1);
// the definitional gcd(3^m - 2^m, 2^m - 1) is recomputed on every 64th m and
// must agree. Records leave scan_range in ascending m whatever the worker
// count.

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "taxiseed/arith.hpp"
#include "taxiseed/errors.hpp"

namespace taxiseed {

struct ScanRecord {
    unsigned m = 0;
    BigInt d, l3, l4;
    BigInt s2;
    TwoWaySource s2_source = TwoWaySource::l4;
    BigInt s3;
    SeedCase s3_case = SeedCase::small_m_special;
    bool exceptional_two_way = false;
};

struct ScanOptions {
    unsigned m_from = 1;
    unsigned m_to = 1;
    unsigned workers = 1;
    unsigned block = 64;
};

inline constexpr unsigned kGcdSampleStride = 64;

inline ScanRecord make_scan_record(const SeedQuantities& q) {
    ScanRecord r;
    r.m = q.m;
    r.d = q.d;
    r.l3 = q.l3;
    r.l4 = q.l4;
    r.s2_source = two_way_source(q);
    r.s2 = r.s2_source == TwoWaySource::l3 ? q.l3 : q.l4;
    auto three = three_way_choice(q);
    r.s3 = std::move(three.seed);
    r.s3_case = three.label;
    r.exceptional_two_way = q.l3 < q.l4;
    return r;
}

namespace detail {

inline std::vector<ScanRecord> scan_block(unsigned first, unsigned last) {
    std::vector<ScanRecord> out;
    out.reserve(last - first + 1);
    BigInt pow3 = pow_ui(3, first);
    BigInt pow2 = pow_ui(2, first);
    for (unsigned m = first;; ++m) {
        const BigInt d = gcd(pow3 - 1, pow2 - 1);
        if (m % kGcdSampleStride == 0 && gcd(pow3 - pow2, pow2 - 1) != d)
            throw InternalConsistencyError("gcd forms disagree at m = " + std::to_string(m));
        out.push_back(make_scan_record(quantities_from(m, pow3, pow2, d)));
        if (m == last)
            break;
        pow3 *= 3;
        pow2 *= 2;
    }
    return out;
}

} // namespace detail

/// Calls sink(record) for every m in [m_from, m_to], in ascending order.
template <class Sink>
void scan_range(const ScanOptions& opt, Sink&& sink) {
    if (opt.m_from < 1 || opt.m_from > opt.m_to)
        throw PreconditionViolation("scan needs 1 <= from <= to");
    if (opt.workers < 1 || opt.block < 1)
        throw PreconditionViolation("scan needs workers >= 1 and block >= 1");

    const std::uint64_t span = std::uint64_t{opt.m_to} - opt.m_from + 1;
    const std::size_t blocks = static_cast<std::size_t>((span + opt.block - 1) / opt.block);
    // Workers may run this many blocks ahead of the writer.
    const std::size_t lookahead = std::size_t{4} * opt.workers;

    std::mutex mu;
    std::condition_variable cv;
    std::map<std::size_t, std::vector<ScanRecord>> ready;
    std::size_t emitted = 0;
    std::size_t next = 0;
    bool stopping = false;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t idx;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return stopping || next >= blocks || next < emitted + lookahead; });
                if (stopping || next >= blocks)
                    return;
                idx = next++;
            }
            const unsigned first = static_cast<unsigned>(opt.m_from + std::uint64_t{idx} * opt.block);
            const unsigned last =
                static_cast<unsigned>(std::min<std::uint64_t>(opt.m_to, std::uint64_t{first} + opt.block - 1));
            try {
                auto records = detail::scan_block(first, last);
                std::lock_guard lock(mu);
                ready.emplace(idx, std::move(records));
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure)
                    failure = std::current_exception();
                stopping = true;
            }
            cv.notify_all();
        }
    };

    std::vector<std::jthread> pool;
    auto stop = [&] {
        {
            std::lock_guard lock(mu);
            stopping = true;
        }
        cv.notify_all();
        pool.clear();
    };

    try {
        for (unsigned w = 0; w < opt.workers; ++w)
            pool.emplace_back(worker);
        for (std::size_t idx = 0; idx < blocks; ++idx) {
            std::vector<ScanRecord> records;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return failure || ready.contains(idx); });
                if (failure)
                    break;
                records = std::move(ready.at(idx));
                ready.erase(idx);
            }
            for (const auto& r : records)
                sink(r);
            {
                std::lock_guard lock(mu);
                ++emitted;
            }
            cv.notify_all();
        }
    } catch (...) {
        stop();
        throw;
    }
    stop();
    if (failure)
        std::rethrow_exception(failure);
}

inline std::vector<ScanRecord> scan_collect(const ScanOptions& opt) {
    std::vector<ScanRecord> out;
    scan_range(opt, [&](const ScanRecord& r) { out.push_back(r); });
    return out;
}

/// Every m <= m_to with l3 < l4, i.e. where the two-way seed is not 2^m + 1.
inline std::vector<unsigned> find_exceptions(unsigned m_to, unsigned workers = 1) {
    std::vector<unsigned> out;
    scan_range(ScanOptions{1, m_to, workers},
               [&](const ScanRecord& r) {
                   if (r.exceptional_two_way)
                       out.push_back(r.m);
               });
    return out;
}

// ---------------------------------------------------------------------------
// Serialization and checkpointed file output

enum class ScanFormat { csv, jsonl };

inline constexpr std::string_view kScanCsvHeader = "m,d,l3,l4,s2,s2_source,s3,s3_case,exceptional_two_way";

inline std::string to_csv_row(const ScanRecord& r) {
    std::string s;
    s += std::to_string(r.m);
    for (const BigInt* x : {&r.d, &r.l3, &r.l4, &r.s2}) {
        s += ',';
        s += to_decimal(*x);
    }
    s += ',';
    s += to_string(r.s2_source);
    s += ',';
    s += to_decimal(r.s3);
    s += ',';
    s += to_string(r.s3_case);
    s += ',';
    s += r.exceptional_two_way ? "true" : "false";
    return s;
}

/// One JSON object per line; big integers as decimal strings.
inline std::string to_jsonl_row(const ScanRecord& r) {
    std::string s = "{\"m\":" + std::to_string(r.m);
    auto field = [&](std::string_view name, std::string_view value) {
        s += ",\"";
        s += name;
        s += "\":\"";
        s += value;
        s += '"';
    };
    field("d", to_decimal(r.d));
    field("l3", to_decimal(r.l3));
    field("l4", to_decimal(r.l4));
    field("s2", to_decimal(r.s2));
    field("s2_source", to_string(r.s2_source));
    field("s3", to_decimal(r.s3));
    field("s3_case", to_string(r.s3_case));
    s += ",\"exceptional_two_way\":";
    s += r.exceptional_two_way ? "true" : "false";
    s += '}';
    return s;
}

/// 64-bit FNV-1a, used as the checkpoint's content hash.
class Fnv1a {
public:
    void update(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001b3ull;
        }
    }
    std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

struct Checkpoint {
    unsigned m_from = 0;
    unsigned last_m = 0;
    ScanFormat format = ScanFormat::csv;
    std::uint64_t hash = 0;
};

inline std::filesystem::path checkpoint_path(const std::filesystem::path& out) {
    auto p = out;
    p += ".ckpt";
    return p;
}

inline void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f)
            throw IoError("cannot write checkpoint " + tmp.string());
        f << "last_m " << c.last_m << '\n'
          << "from " << c.m_from << '\n'
          << "format " << (c.format == ScanFormat::csv ? "csv" : "jsonl") << '\n'
          << "hash " << std::hex << c.hash << '\n';
        if (!f)
            throw IoError("cannot write checkpoint " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot move checkpoint into place: " + ec.message());
}

inline std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f)
        return std::nullopt;
    Checkpoint c;
    std::string key, format;
    if (!(f >> key >> c.last_m) || key != "last_m")
        return std::nullopt;
    if (!(f >> key >> c.m_from) || key != "from")
        return std::nullopt;
    if (!(f >> key >> format) || key != "format" || (format != "csv" && format != "jsonl"))
        return std::nullopt;
    c.format = format == "csv" ? ScanFormat::csv : ScanFormat::jsonl;
    if (!(f >> key >> std::hex >> c.hash) || key != "hash")
        return std::nullopt;
    return c;
}

struct ScanFileResult {
    bool resumed = false;
    unsigned first_m_written = 0; // 0 when nothing was left to do
    std::uint64_t records_written = 0;
    std::vector<unsigned> exceptions; // among the records written by this call
};

/// Writes the scan to `out` (CSV with header, or JSON lines) and keeps
/// `<out>.ckpt` up to date. With resume, a checkpoint whose hash matches the
/// file's current contents continues after its last m; anything else starts
/// over.
inline ScanFileResult scan_to_file(const ScanOptions& opt, const std::filesystem::path& out, ScanFormat format,
                                   bool resume, unsigned checkpoint_every = 64) {
    const auto ckpt_path = checkpoint_path(out);
    ScanFileResult result;
    Fnv1a hash;
    ScanOptions todo = opt;
    bool append = false;

    if (resume) {
        auto c = read_checkpoint(ckpt_path);
        std::ifstream existing(out, std::ios::binary);
        if (c && existing && c->m_from == opt.m_from && c->format == format && c->last_m >= opt.m_from - 1 &&
            c->last_m <= opt.m_to) {
            std::stringstream buf;
            buf << existing.rdbuf();
            Fnv1a h;
            h.update(buf.str());
            if (h.value() == c->hash) {
                hash = h;
                append = true;
                result.resumed = true;
                todo.m_from = c->last_m + 1;
            }
        }
    }

    std::ofstream f(out, append ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open " + out.string());
    auto put = [&](const std::string& line) {
        f << line << '\n';
        hash.update(line);
        hash.update("\n");
    };
    auto save = [&](unsigned last_m) {
        f.flush();
        if (!f)
            throw IoError("write failed on " + out.string());
        write_checkpoint(ckpt_path, Checkpoint{opt.m_from, last_m, format, hash.value()});
    };

    if (!append) {
        if (format == ScanFormat::csv)
            put(std::string(kScanCsvHeader));
        save(opt.m_from - 1);
    }
    if (todo.m_from > todo.m_to)
        return result;

    result.first_m_written = todo.m_from;
    scan_range(todo, [&](const ScanRecord& r) {
        put(format == ScanFormat::csv ? to_csv_row(r) : to_jsonl_row(r));
        ++result.records_written;
        if (r.exceptional_two_way)
            result.exceptions.push_back(r.m);
        if (r.m == todo.m_to || result.records_written % checkpoint_every == 0)
            save(r.m);
    });
    return result;
}

} // namespace taxiseed
