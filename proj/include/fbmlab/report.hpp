#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "check.hpp"
#include "version.hpp"

namespace fbmlab {

using ordered_json = nlohmann::ordered_json;

/// FNV-1a over raw bytes; doubles are hashed through their bit patterns so the
/// digest changes iff any numeric output changes.
class DeterminismHash {
  public:
    void add_bytes(const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001B3ull;
        }
    }
    void add(double v) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        add_bytes(&bits, sizeof(bits));
    }
    void add(std::uint64_t v) { add_bytes(&v, sizeof(v)); }
    void add(const std::string& s) { add_bytes(s.data(), s.size()); }
    std::uint64_t value() const { return state_; }
    std::string hex() const {
        char buf[19];
        std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(state_));
        return buf;
    }

  private:
    std::uint64_t state_ = 0xCBF29CE484222325ull;
};

/// Experiment report serialized as JSON with stable key order. The timestamp
/// and elapsed fields vary run to run and are excluded from the determinism
/// hash; every other field reproduces bitwise for an identical configuration.
struct Report {
    ordered_json config = ordered_json::object();
    ordered_json results = ordered_json::object();
    ordered_json constants = ordered_json::object();
    ordered_json verdicts = ordered_json::object();
    double elapsed_seconds = 0.0;

    void add_check(const CheckResult& c) {
        ordered_json j;
        j["lhs"] = c.lhs;
        j["rhs"] = c.rhs;
        j["se_combined"] = c.se_combined;
        j["exact"] = c.exact;
        for (const auto& [k, v] : c.details) j[k] = v;
        results[c.name] = std::move(j);
        verdicts[c.name] = c.pass;
    }

    bool all_pass() const {
        for (const auto& [k, v] : verdicts.items())
            if (!v.get<bool>()) return false;
        return true;
    }

    std::string determinism_hash() const {
        DeterminismHash h;
        h.add(config.dump());
        h.add(results.dump());
        h.add(constants.dump());
        h.add(verdicts.dump());
        return h.hex();
    }

    ordered_json to_json() const {
        ordered_json j;
        j["tool"] = "fbmlab";
        j["version"] = version_string;
        j["config"] = config;
        j["results"] = results;
        j["constants"] = constants;
        j["verdicts"] = verdicts;
        j["determinism_hash"] = determinism_hash();
        j["elapsed_seconds"] = elapsed_seconds;
        const auto now = std::chrono::system_clock::now();
        j["timestamp"] = static_cast<std::int64_t>(
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
        return j;
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open report file: " + path);
        out << to_json().dump(2) << "\n";
    }
};

/// CSV with header row, '.' decimals, LF line endings.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open csv file: " + path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }
    void row(const std::vector<double>& values) {
        char buf[32];
        for (std::size_t i = 0; i < values.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
            out_ << (i ? "," : "") << buf;
        }
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

}  // namespace fbmlab
