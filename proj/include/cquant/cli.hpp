// Command-line front end: design codebooks, evaluate configurations,
// regenerate the summary tables, sweep variance mismatch, and
// encode/decode sample files.
//
// Stream convention: with --out, data goes to the file and the one-line
// summary to the output stream; without --out, data goes to the output
// stream and the summary moves to the error stream so piped data stays
// clean.  Exit code 0 iff no precondition was violated.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cquant/evaluation.hpp"
#include "cquant/serialization.hpp"

namespace cquant {

struct RunConfig {
    std::string command;
    std::string model = "pusq";  // plsq | pusq
    std::vector<int> N_list;     // level counts; most commands take one
    int L = 2;                   // segments per quadrant
    double sigma = 1.0;
    std::uint64_t seed = 12345;
    std::size_t samples = 0;     // Monte Carlo sample count (0 = skip)
    std::string in_path;
    std::string out_path;
    std::string format = "pretty"; // json | csv | pretty
    bool binary = false;           // binary sample files for the codec
    double min_db = -10.0;         // sweep range, variance mismatch in dB
    double max_db = 10.0;
    double step_db = 1.0;

    ApproxKind kind() const { return model_kind(model); }
    int single_N() const {
        if (N_list.size() != 1)
            throw std::invalid_argument(command + ": expected a single N, got " +
                                        std::to_string(N_list.size()) + " values");
        return N_list.front();
    }
};

namespace detail {

// Routes data to --out (summary to `out`) or to `out` (summary to `err`).
struct DataSink {
    std::ofstream file;
    std::ostream* data;
    std::ostream* note;

    DataSink(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool binary_data = false) {
        if (!cfg.out_path.empty()) {
            file.open(cfg.out_path, binary_data ? std::ios::binary : std::ios::out);
            if (!file) throw std::runtime_error("cannot open output file: " + cfg.out_path);
            data = &file;
            note = &out;
        } else {
            data = &out;
            note = &err;
        }
    }
};

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string fmt_db(double v) { // pretty dB value; inf sentinel spelled out
    return std::isinf(v) ? "inf" : fmt6(v);
}

inline std::vector<double> read_sample_file(const RunConfig& cfg) {
    if (cfg.in_path.empty()) throw std::invalid_argument(cfg.command + ": --in <file> is required");
    std::ifstream is(cfg.in_path, cfg.binary ? std::ios::binary : std::ios::in);
    if (!is) throw std::runtime_error("cannot open input file: " + cfg.in_path);
    return cfg.binary ? read_samples_binary(is, cfg.in_path) : read_samples_text(is, cfg.in_path);
}

inline void print_report_pretty(const EvaluationReport& r, std::ostream& os) {
    os << "model=" << model_name(r.kind) << " N=" << r.N << " L=" << r.L
       << " sigma=" << fmt6(r.sigma) << '\n';
    os << "  x_max = " << fmt6(r.x_max) << "   y_max = " << fmt6(r.y_max)
       << "   k = " << fmt6(r.k) << '\n';
    os << "  Dg_bennett = " << fmt6(r.Dg_bennett) << "   Dg_exact = " << fmt6(r.Dg_exact)
       << "   Do = " << fmt6(r.Do) << '\n';
    os << "  SQNR_bennett = " << fmt6(r.SQNR_bennett)
       << " dB   SQNR_exact = " << fmt6(r.SQNR_exact) << " dB\n";
    os << "  delta = " << fmt6(r.delta) << "   e = [";
    for (std::size_t i = 0; i < r.e.size(); ++i) os << (i ? ", " : "") << fmt6(r.e[i]);
    os << "]\n";
    if (r.mc_samples)
        os << "  SQNR_mc = " << fmt_db(r.SQNR_mc) << " dB   (n=" << r.mc_samples
           << ", seed=" << r.mc_seed << ")\n";
}

} // namespace detail

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_design(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Codebook cb = design_codebook(cfg.kind(), cfg.single_N(), cfg.L, cfg.sigma);
    detail::DataSink sink(cfg, out, err);
    *sink.data << codebook_to_json(cb);
    *sink.note << "designed model=" << cfg.model << " N=" << cb.N << " L=" << cb.approx.grid.L
               << " sigma=" << detail::fmt6(cb.sigma) << ": x_max=" << detail::fmt6(cb.x_max())
               << " k=" << detail::fmt6(cb.k) << " N_i=[";
    for (std::size_t i = 0; i < cb.allocation.counts.size(); ++i)
        *sink.note << (i ? ", " : "") << cb.allocation.counts[i];
    *sink.note << "]\n";
    return 0;
}

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<EvaluationReport> reports;
    if (!cfg.in_path.empty()) {
        // evaluate a codebook file; model/N/L/sigma flags are ignored
        std::ifstream is(cfg.in_path);
        if (!is) throw std::runtime_error("cannot open input file: " + cfg.in_path);
        std::ostringstream buf;
        buf << is.rdbuf();
        reports.push_back(evaluate_codebook(parse_codebook(buf.str()), cfg.samples, cfg.seed));
    } else {
        std::vector<int> Ns = cfg.N_list.empty() ? std::vector<int>{16} : cfg.N_list;
        for (const int n : Ns)
            reports.push_back(evaluate_design(cfg.kind(), n, cfg.L, cfg.sigma, cfg.samples, cfg.seed));
    }
    detail::DataSink sink(cfg, out, err);
    if (cfg.format == "json") {
        if (reports.size() == 1) {
            *sink.data << report_to_json(reports.front());
        } else {
            *sink.data << "[\n";
            for (std::size_t i = 0; i < reports.size(); ++i)
                *sink.data << report_to_json(reports[i]) << (i + 1 < reports.size() ? ",\n" : "");
            *sink.data << "]\n";
        }
    } else if (cfg.format == "csv") {
        *sink.data << report_csv_header() << '\n';
        for (const auto& r : reports) *sink.data << report_to_csv_row(r) << '\n';
    } else {
        for (const auto& r : reports) detail::print_report_pretty(r, *sink.data);
    }
    *sink.note << "evaluated " << reports.size() << " configuration"
               << (reports.size() == 1 ? "" : "s") << '\n';
    return 0;
}

inline int cmd_tables(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::vector<int> Ns = cfg.N_list.empty() ? std::vector<int>{16, 32} : cfg.N_list;
    std::vector<EvaluationReport> reports; // pusq then plsq within each N
    for (const int n : Ns) {
        reports.push_back(evaluate_design(ApproxKind::uniform, n, cfg.L, cfg.sigma));
        reports.push_back(evaluate_design(ApproxKind::linear, n, cfg.L, cfg.sigma));
    }
    detail::DataSink sink(cfg, out, err);
    if (cfg.format == "csv") {
        // one header, then the Bennett-side rows, then the exact-side rows
        *sink.data << report_csv_header() << '\n';
        for (const auto& r : reports) *sink.data << report_to_csv_row(r, true, false) << '\n';
        for (const auto& r : reports) *sink.data << report_to_csv_row(r, false, true) << '\n';
    } else if (cfg.format == "json") {
        *sink.data << "{\n  \"bennett\": [\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            *sink.data << "    {\"model\": \"" << model_name(r.kind) << "\", \"N\": " << r.N
                       << ", \"SQNR_dB\": " << detail::fmt17(r.SQNR_bennett)
                       << ", \"delta\": " << detail::fmt17(r.delta) << "}"
                       << (i + 1 < reports.size() ? ",\n" : "\n");
        }
        *sink.data << "  ],\n  \"exact\": [\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            *sink.data << "    {\"model\": \"" << model_name(r.kind) << "\", \"N\": " << r.N
                       << ", \"SQNR_dB\": " << detail::fmt17(r.SQNR_exact) << "}"
                       << (i + 1 < reports.size() ? ",\n" : "\n");
        }
        *sink.data << "  ]\n}\n";
    } else {
        *sink.data << "Bennett closed-form SQNR and approximation error (L=" << cfg.L
                   << ", sigma=" << detail::fmt6(cfg.sigma) << ")\n";
        *sink.data << "  model    N    SQNR_dB     delta\n";
        for (const auto& r : reports) {
            char row[96];
            std::snprintf(row, sizeof row, "  %-6s %4d   %8.4f  %8.4f\n", model_name(r.kind), r.N,
                          r.SQNR_bennett, r.delta);
            *sink.data << row;
        }
        *sink.data << "\nExact-formula SQNR (L=" << cfg.L << ", sigma=" << detail::fmt6(cfg.sigma)
                   << ")\n";
        *sink.data << "  model    N    SQNR_dB\n";
        for (const auto& r : reports) {
            char row[96];
            std::snprintf(row, sizeof row, "  %-6s %4d   %8.4f\n", model_name(r.kind), r.N,
                          r.SQNR_exact);
            *sink.data << row;
        }
    }
    *sink.note << "tabulated " << reports.size() << " configurations\n";
    return 0;
}

inline int cmd_codec_encode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Codebook cb = design_codebook(cfg.kind(), cfg.single_N(), cfg.L, cfg.sigma);
    const std::vector<double> xs = detail::read_sample_file(cfg);
    std::vector<int> indices(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) indices[i] = encode(cb, xs[i]);
    detail::DataSink sink(cfg, out, err);
    write_indices(*sink.data, indices);
    *sink.note << "encoded " << xs.size() << " samples";
    if (!xs.empty()) *sink.note << ", empirical SQNR = " << detail::fmt_db(empirical_sqnr(xs, cb)) << " dB";
    *sink.note << '\n';
    return 0;
}

inline int cmd_codec_decode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Codebook cb = design_codebook(cfg.kind(), cfg.single_N(), cfg.L, cfg.sigma);
    if (cfg.in_path.empty()) throw std::invalid_argument("codec-decode: --in <file> is required");
    std::ifstream is(cfg.in_path);
    if (!is) throw std::runtime_error("cannot open input file: " + cfg.in_path);
    const std::vector<int> indices = read_indices(is, cfg.in_path);
    std::vector<double> xs(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= cb.N)
            throw std::runtime_error(cfg.in_path + ": index " + std::to_string(indices[i]) +
                                     " out of range at record " + std::to_string(i + 1));
        xs[i] = decode(cb, indices[i]);
    }
    detail::DataSink sink(cfg, out, err, cfg.binary);
    if (cfg.binary)
        write_samples_binary(*sink.data, xs);
    else
        write_samples_text(*sink.data, xs);
    *sink.note << "decoded " << indices.size() << " indices\n";
    return 0;
}

// Exact-formula SQNR of a fixed codebook (designed at --sigma) against
// variance-mismatched sources; emits CSV of (variance_dB, SQNR_dB).
inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!(cfg.step_db > 0.0)) throw std::invalid_argument("sweep: --step-db must be > 0");
    const Codebook cb = design_codebook(cfg.kind(), cfg.single_N(), cfg.L, cfg.sigma);
    detail::DataSink sink(cfg, out, err);
    *sink.data << "variance_dB,SQNR_dB\n";
    long points = 0;
    if (cfg.max_db >= cfg.min_db) {
        const long steps = std::lround(std::floor((cfg.max_db - cfg.min_db) / cfg.step_db + 1e-9));
        for (long i = 0; i <= steps; ++i) {
            const double db = cfg.min_db + i * cfg.step_db;
            const LaplacianSource src(cfg.sigma * std::pow(10.0, db / 20.0));
            const double D = exact_granular(src, cb) + overload_distortion(src, cb.x_max(), cb.y_max);
            *sink.data << detail::fmt17(db) << ',' << detail::fmt17(sqnr(D, src.sigma)) << '\n';
            ++points;
        }
    }
    *sink.note << "swept " << points << " mismatch points\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Dispatcher

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Companding scalar quantizer toolkit for Laplacian sources"};
    app.name("cquant");
    app.require_subcommand(1);

    const auto add_model_options = [&cfg](CLI::App* sub) {
        sub->add_option("--model", cfg.model, "PDF-approximation model")
            ->check(CLI::IsMember({"plsq", "pusq"}))
            ->capture_default_str();
        sub->add_option("-N,--levels", cfg.N_list, "total level count(s), even and >= 4")
            ->delimiter(',');
        sub->add_option("-L,--segments", cfg.L, "segments per quadrant")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--sigma", cfg.sigma, "source standard deviation")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };
    const auto add_out = [&cfg](CLI::App* sub) {
        sub->add_option("--out", cfg.out_path, "write data to this file instead of stdout");
    };
    const auto add_format = [&cfg](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"json", "csv", "pretty"}))
            ->capture_default_str();
    };

    CLI::App* design = app.add_subcommand("design", "design a codebook and write it as JSON");
    add_model_options(design);
    add_out(design);
    add_format(design); // accepted for flag uniformity; codebooks are always JSON

    CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a design or a codebook file");
    add_model_options(evaluate);
    add_out(evaluate);
    add_format(evaluate);
    evaluate->add_option("--in", cfg.in_path, "codebook JSON to evaluate (overrides design flags)");
    evaluate->add_option("--samples", cfg.samples, "Monte Carlo sample count (0 = skip)");
    evaluate->add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();

    CLI::App* tables = app.add_subcommand("tables", "emit the Bennett and exact-formula tables");
    add_model_options(tables); // --model is accepted but both models are always tabulated
    add_out(tables);
    add_format(tables);

    CLI::App* codec_encode =
        app.add_subcommand("codec-encode", "map a sample file to level indices");
    add_model_options(codec_encode);
    add_out(codec_encode);
    codec_encode->add_option("--in", cfg.in_path, "sample file (text, or CQ01 binary with --binary)");
    codec_encode->add_flag("--binary", cfg.binary, "read samples in the CQ01 binary format");

    CLI::App* codec_decode =
        app.add_subcommand("codec-decode", "map an index file back to reproduction amplitudes");
    add_model_options(codec_decode);
    add_out(codec_decode);
    codec_decode->add_option("--in", cfg.in_path, "index file, one index per line");
    codec_decode->add_flag("--binary", cfg.binary, "write samples in the CQ01 binary format");

    CLI::App* sweep =
        app.add_subcommand("sweep", "exact SQNR of a fixed design under variance mismatch");
    add_model_options(sweep);
    add_out(sweep);
    sweep->add_option("--min-db", cfg.min_db, "sweep start, dB of variance mismatch")
        ->capture_default_str();
    sweep->add_option("--max-db", cfg.max_db, "sweep end, dB of variance mismatch")
        ->capture_default_str();
    sweep->add_option("--step-db", cfg.step_db, "sweep step, dB")->capture_default_str();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::Error& e) {
        return app.exit(e, out, err);
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    if (cfg.N_list.empty() && cfg.command != "evaluate" && cfg.command != "tables")
        cfg.N_list = {16};

    try {
        if (chosen == design) return cmd_design(cfg, out, err);
        if (chosen == evaluate) return cmd_evaluate(cfg, out, err);
        if (chosen == tables) return cmd_tables(cfg, out, err);
        if (chosen == codec_encode) return cmd_codec_encode(cfg, out, err);
        if (chosen == codec_decode) return cmd_codec_decode(cfg, out, err);
        return cmd_sweep(cfg, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace cquant
