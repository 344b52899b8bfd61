// Serialization: codebook and report JSON, the fixed-order report CSV
// row, newline-delimited text samples, the "CQ01" little-endian binary
// sample format, and index files.
//
// JSON is emitted by hand with 17 significant digits so that every double
// survives a write/parse round trip bit-for-bit (design -> file ->
// evaluate must equal evaluate-in-process exactly).  nlohmann/json is
// used for parsing only.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cquant/evaluation.hpp"

namespace cquant {

namespace detail {

// 17 significant digits: the shortest count that round-trips any double.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON value text for a double; non-finite values become quoted sentinels
// ("inf", "-inf", "nan") since bare IEEE specials are not valid JSON.
inline std::string json_number(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0.0 ? "\"inf\"" : "\"-inf\"";
    return fmt17(v);
}

inline void json_array(std::ostringstream& os, const std::vector<double>& values) {
    os << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ", ";
        os << json_number(values[i]);
    }
    os << ']';
}

} // namespace detail

// ---------------------------------------------------------------------------
// Codebook JSON

inline std::string codebook_to_json(const Codebook& cb) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"model\": \"" << model_name(cb.kind()) << "\",\n";
    os << "  \"N\": " << cb.N << ",\n";
    os << "  \"L\": " << cb.approx.grid.L << ",\n";
    os << "  \"sigma\": " << detail::json_number(cb.sigma) << ",\n";
    os << "  \"x_max\": " << detail::json_number(cb.x_max()) << ",\n";
    os << "  \"k\": " << detail::json_number(cb.k) << ",\n";
    os << "  \"y_max\": " << detail::json_number(cb.y_max) << ",\n";
    os << "  \"segments\": [\n";
    for (int i = 0; i < cb.approx.grid.L; ++i) {
        os << "    {";
        if (cb.kind() == ApproxKind::linear)
            os << "\"a_i\": " << detail::json_number(cb.approx.linear[i].a)
               << ", \"b_i\": " << detail::json_number(cb.approx.linear[i].b);
        else
            os << "\"p_i_u\": " << detail::json_number(cb.approx.uniform_level[i]);
        os << ", \"N_i\": " << cb.allocation.counts[i] << "}";
        os << (i + 1 < cb.approx.grid.L ? ",\n" : "\n");
    }
    os << "  ],\n";
    os << "  \"thresholds\": ";
    detail::json_array(os, cb.thresholds);
    os << ",\n  \"levels\": ";
    detail::json_array(os, cb.levels);
    os << "\n}\n";
    return os.str();
}

inline Codebook parse_codebook(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw std::runtime_error(std::string("parse_codebook: invalid JSON: ") + ex.what());
    }
    try {
        Codebook cb;
        const ApproxKind kind = model_kind(j.at("model").get<std::string>());
        cb.N = j.at("N").get<int>();
        const int L = j.at("L").get<int>();
        cb.sigma = j.at("sigma").get<double>();
        const double x_max = j.at("x_max").get<double>();
        cb.approx.grid = make_grid(x_max, L);
        cb.approx.kind = kind;
        cb.approx.sigma = cb.sigma;
        for (const auto& seg : j.at("segments")) {
            if (kind == ApproxKind::linear)
                cb.approx.linear.push_back({seg.at("a_i").get<double>(), seg.at("b_i").get<double>()});
            else
                cb.approx.uniform_level.push_back(seg.at("p_i_u").get<double>());
            cb.allocation.counts.push_back(seg.at("N_i").get<int>());
        }
        cb.thresholds = j.at("thresholds").get<std::vector<double>>();
        cb.levels = j.at("levels").get<std::vector<double>>();
        cb.y_max = j.at("y_max").get<double>();
        cb.k = j.at("k").get<double>();

        // structural validation
        if (cb.N < 4 || cb.N % 2 != 0)
            throw std::runtime_error("parse_codebook: N must be even and >= 4");
        const int M = cb.half();
        if (static_cast<int>(cb.allocation.counts.size()) != L)
            throw std::runtime_error("parse_codebook: expected one segment entry per segment");
        int total = 0;
        for (const int c : cb.allocation.counts) total += c;
        if (total != M)
            throw std::runtime_error("parse_codebook: segment cell counts do not sum to (N-2)/2");
        if (static_cast<int>(cb.thresholds.size()) != M + 1)
            throw std::runtime_error("parse_codebook: expected (N-2)/2 + 1 thresholds");
        if (static_cast<int>(cb.levels.size()) != M + 1)
            throw std::runtime_error("parse_codebook: expected (N-2)/2 granular levels plus y_max");
        if (cb.thresholds.front() != 0.0 || cb.thresholds.back() != x_max)
            throw std::runtime_error("parse_codebook: thresholds must span [0, x_max]");
        for (std::size_t t = 1; t < cb.thresholds.size(); ++t)
            if (!(cb.thresholds[t - 1] < cb.thresholds[t]))
                throw std::runtime_error("parse_codebook: thresholds not strictly increasing");
        if (cb.levels.back() != cb.y_max)
            throw std::runtime_error("parse_codebook: last level must equal y_max");
        return cb;
    } catch (const nlohmann::json::exception& ex) {
        throw std::runtime_error(std::string("parse_codebook: malformed codebook document: ") + ex.what());
    }
}

// ---------------------------------------------------------------------------
// Evaluation report JSON / CSV

inline std::string report_to_json(const EvaluationReport& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"kind\": \"" << model_name(r.kind) << "\",\n";
    os << "  \"N\": " << r.N << ",\n";
    os << "  \"L\": " << r.L << ",\n";
    os << "  \"sigma\": " << detail::json_number(r.sigma) << ",\n";
    os << "  \"x_max\": " << detail::json_number(r.x_max) << ",\n";
    os << "  \"y_max\": " << detail::json_number(r.y_max) << ",\n";
    os << "  \"k\": " << detail::json_number(r.k) << ",\n";
    os << "  \"bennett_granular_count\": " << r.bennett_count << ",\n";
    os << "  \"Dg_bennett\": " << detail::json_number(r.Dg_bennett) << ",\n";
    os << "  \"Dg_exact\": " << detail::json_number(r.Dg_exact) << ",\n";
    os << "  \"Do\": " << detail::json_number(r.Do) << ",\n";
    os << "  \"D_total_bennett\": " << detail::json_number(r.D_total_bennett) << ",\n";
    os << "  \"D_total_exact\": " << detail::json_number(r.D_total_exact) << ",\n";
    os << "  \"SQNR_bennett_dB\": " << detail::json_number(r.SQNR_bennett) << ",\n";
    os << "  \"SQNR_exact_dB\": " << detail::json_number(r.SQNR_exact) << ",\n";
    os << "  \"SQNR_mc_dB\": " << (r.mc_samples ? detail::json_number(r.SQNR_mc) : "null") << ",\n";
    os << "  \"mc_samples\": " << r.mc_samples << ",\n";
    os << "  \"mc_seed\": " << r.mc_seed << ",\n";
    os << "  \"delta\": " << detail::json_number(r.delta) << ",\n";
    os << "  \"e\": ";
    detail::json_array(os, r.e);
    os << "\n}\n";
    return os.str();
}

inline std::string report_csv_header() {
    return "kind,N,L,sigma,SQNR_bennett_dB,SQNR_exact_dB,SQNR_mc_dB,delta,Dg_bennett,Dg_exact,Do";
}

// One CSV row in the fixed column order.  The with_* switches let the
// tables command emit Bennett-only and exact-only rows; omitted columns
// stay empty.
inline std::string report_to_csv_row(const EvaluationReport& r, bool with_bennett = true,
                                     bool with_exact = true) {
    std::ostringstream os;
    os << model_name(r.kind) << ',' << r.N << ',' << r.L << ',' << detail::fmt17(r.sigma) << ',';
    if (with_bennett) os << detail::fmt17(r.SQNR_bennett);
    os << ',';
    if (with_exact) os << detail::fmt17(r.SQNR_exact);
    os << ',';
    if (r.mc_samples) os << detail::fmt17(r.SQNR_mc);
    os << ',';
    if (with_bennett) os << detail::fmt17(r.delta);
    os << ',';
    if (with_bennett) os << detail::fmt17(r.Dg_bennett);
    os << ',';
    if (with_exact) os << detail::fmt17(r.Dg_exact);
    os << ',' << detail::fmt17(r.Do);
    return os.str();
}

// ---------------------------------------------------------------------------
// Sample files: newline-delimited decimal text, or "CQ01" + packed
// little-endian IEEE-754 doubles.

inline constexpr char sample_magic[4] = {'C', 'Q', '0', '1'};

inline void write_samples_text(std::ostream& os, const std::vector<double>& xs) {
    for (const double x : xs) os << detail::fmt17(x) << '\n';
}

inline std::vector<double> read_samples_text(std::istream& is, const std::string& name) {
    std::vector<double> xs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue; // tolerate blank lines (e.g. trailing newline)
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
        if (end == line.c_str() || *end != '\0')
            throw std::runtime_error(name + ": malformed sample at line " + std::to_string(line_no));
        xs.push_back(v);
    }
    return xs;
}

inline void write_samples_binary(std::ostream& os, const std::vector<double>& xs) {
    os.write(sample_magic, 4);
    for (const double x : xs) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        char bytes[8];
        for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>(bits >> (8 * i));
        os.write(bytes, 8);
    }
}

inline std::vector<double> read_samples_binary(std::istream& is, const std::string& name) {
    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::memcmp(magic, sample_magic, 4) != 0)
        throw std::runtime_error(name + ": missing CQ01 magic header");
    std::vector<double> xs;
    std::size_t offset = 4;
    char bytes[8];
    while (is.read(bytes, 8) || is.gcount() > 0) {
        if (is.gcount() != 8)
            throw std::runtime_error(name + ": truncated sample record at byte offset " +
                                     std::to_string(offset));
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
        double v;
        std::memcpy(&v, &bits, sizeof v);
        xs.push_back(v);
        offset += 8;
    }
    return xs;
}

// ---------------------------------------------------------------------------
// Index files: one decimal level index per line.

inline void write_indices(std::ostream& os, const std::vector<int>& idx) {
    for (const int i : idx) os << i << '\n';
}

inline std::vector<int> read_indices(std::istream& is, const std::string& name) {
    std::vector<int> idx;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        char* end = nullptr;
        const long v = std::strtol(line.c_str(), &end, 10);
        while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
        if (end == line.c_str() || *end != '\0')
            throw std::runtime_error(name + ": malformed index at line " + std::to_string(line_no));
        idx.push_back(static_cast<int>(v));
    }
    return idx;
}

} // namespace cquant
