#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "discendo/corona.hpp"
#include "discendo/disc.hpp"
#include "discendo/fixed_point.hpp"
#include "discendo/map_expr.hpp"
#include "discendo/parse.hpp"
#include "discendo/spectrum.hpp"

// Command-line surface.  Every command emits one canonical report:
// a JSON object {command, inputs, outputs, status} with sorted keys, complex
// numbers as [re, im] pairs, and status one of pass / fail / inconclusive.
// Exit codes: 0 pass, 1 fail or inconclusive, 2 usage or input errors.
// Reports are byte-identical across runs for identical arguments (timing
// goes to stderr only).  --out selects the encoding: "json" (default) or
// "csv" to stdout, anything else is a file path (.csv extension selects CSV).

namespace discendo::cli {

using nlohmann::json;

struct RunReport {
    std::string command;
    json inputs;
    json outputs;
    std::string status = "pass";  // pass | fail | inconclusive
    double wall_time_s = 0.0;     // reported on stderr, never in the canonical JSON

    json to_json() const {
        return json{{"command", command},
                    {"inputs", inputs},
                    {"outputs", outputs},
                    {"status", status}};
    }
};

struct RunOutcome {
    int exit_code = 0;
    std::string out;  // canonical report (or file-written confirmation: empty)
    std::string err;  // diagnostics, usage errors, timing
};

// Which library operations each command exercises; the canonical surface is
// one command per operation.
inline const std::vector<std::pair<std::string, std::vector<std::string>>>& command_table() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
        {"rho", {"pseudo_distance", "hyperbolic_distance"}},
        {"fixed-point", {"find_fixed_point", "derivative"}},
        {"spectrum", {"theoretical_spectrum"}},
        {"truncate",
         {"build_truncation", "eigenvalues", "compare_spectra", "conjugate_to_origin",
          "moebius_inverse", "moebius_derivative", "taylor", "series_multiply"}},
        {"compact", {"compact_range_check", "sup_norm_estimate"}},
        {"abba", {"ab_ba_check"}},
        {"example-a", {"verify_example_a", "psi_stage", "psi_limit"}},
        {"example-b", {"verify_example_b"}},
        {"interp", {"interpolating_check"}},
        {"endo",
         {"apply_endomorphism", "iterate_endomorphism", "lm_surrogate", "moebius_eval", "eval"}},
    };
    return table;
}

namespace detail {

inline json j_complex(Complex v) { return json::array({v.real(), v.imag()}); }

inline json j_complex_list(const std::vector<Complex>& values) {
    json out = json::array();
    for (Complex v : values) out.push_back(j_complex(v));
    return out;
}

inline Complex parse_complex_text(const std::string& text) {
    const std::size_t comma = text.find(',');
    auto to_double = [&](const std::string& part) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(part, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("expected a number in '" + text + "'");
        }
        while (used < part.size() && std::isspace(static_cast<unsigned char>(part[used]))) ++used;
        if (used != part.size()) {
            throw std::invalid_argument("trailing characters in number '" + part + "'");
        }
        return value;
    };
    if (comma == std::string::npos) return {to_double(text), 0.0};
    return {to_double(text.substr(0, comma)), to_double(text.substr(comma + 1))};
}

inline std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string part =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (part.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
        std::size_t used = 0;
        values.push_back(std::stod(part, &used));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

inline BoundaryNet parse_net_text(const std::string& text) {
    if (text.rfind("geometric:", 0) == 0) {
        return BoundaryNet::geometric(std::stoi(text.substr(10)));
    }
    return BoundaryNet(parse_double_list(text));
}

inline std::vector<DiscPoint> parse_points_text(const std::string& text) {
    if (text.rfind("geometric:", 0) == 0) {
        return geometric_zero_sequence(std::stoi(text.substr(10)));
    }
    std::vector<DiscPoint> points;
    for (double x : parse_double_list(text)) points.emplace_back(x);
    return points;
}

// Iteration budget override shared by the fixed-point based commands.
inline long max_iterations_from_env() {
    if (const char* raw = std::getenv("DISC_ENDO_MAXITER")) {
        char* end = nullptr;
        const long value = std::strtol(raw, &end, 10);
        if (end != raw && *end == '\0' && value >= 1) return value;
    }
    return 100000;
}

inline std::string csv_number(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

struct HandlerResult {
    RunReport report;
    std::string csv;  // empty when the command has no tabular form
};

// ---- individual commands ---------------------------------------------------

struct RhoArgs {
    std::string z, w;
};

inline HandlerResult run_rho(const RhoArgs& args) {
    const DiscPoint z{parse_complex_text(args.z)};
    const DiscPoint w{parse_complex_text(args.w)};
    HandlerResult result;
    result.report.command = "rho";
    result.report.inputs = {{"z", j_complex(z.value())}, {"w", j_complex(w.value())}};
    result.report.outputs = {{"pseudo", pseudo_distance(z, w)},
                             {"hyperbolic", hyperbolic_distance(z, w)}};
    return result;
}

struct FixedPointArgs {
    std::string map;
    double tol = 1e-12;
};

inline HandlerResult run_fixed_point(const FixedPointArgs& args) {
    const MapExpr m = parse_map(args.map);
    const long max_iter = max_iterations_from_env();
    HandlerResult result;
    result.report.command = "fixed-point";
    result.report.inputs = {{"map", args.map}, {"tol", args.tol}, {"max_iter", max_iter}};
    const FixedPointResult fp = find_fixed_point(m, args.tol, max_iter);
    result.report.outputs = {{"z0", j_complex(fp.z0.value())},
                             {"multiplier", j_complex(fp.multiplier)},
                             {"residual", fp.residual},
                             {"iterations", fp.iterations}};
    return result;
}

struct SpectrumArgs {
    std::string mu;
    std::string map;
    int n_max = 8;
    double eps = 1e-12;
};

inline HandlerResult run_spectrum(const SpectrumArgs& args) {
    if (args.mu.empty() == args.map.empty()) {
        throw std::invalid_argument("spectrum: provide exactly one of --mu / --map");
    }
    Complex mu;
    if (!args.mu.empty()) {
        mu = parse_complex_text(args.mu);
    } else {
        mu = find_fixed_point(parse_map(args.map), 1e-12, max_iterations_from_env()).multiplier;
    }
    const SpectrumSet set = theoretical_spectrum(mu, args.n_max, args.eps);
    HandlerResult result;
    result.report.command = "spectrum";
    result.report.inputs = {{"multiplier", j_complex(mu)},
                            {"n_max", args.n_max},
                            {"eps", args.eps}};
    if (!args.map.empty()) result.report.inputs["map"] = args.map;
    result.report.outputs = {{"points", j_complex_list(set.points)}};
    result.csv = "n,re,im\n";
    for (std::size_t i = 0; i < set.points.size(); ++i) {
        result.csv += std::to_string(i) + "," + csv_number(set.points[i].real()) + "," +
                      csv_number(set.points[i].imag()) + "\n";
    }
    return result;
}

struct TruncateArgs {
    std::string map;
    int n = 16;
    bool compare = false;
    int k = 8;
    double tol = 1e-6;
};

inline HandlerResult run_truncate(const TruncateArgs& args) {
    const MapExpr m = parse_map(args.map);
    const FixedPointResult fp = find_fixed_point(m, 1e-12, max_iterations_from_env());
    const MapExpr centered = conjugate_to_origin(m, fp.z0);
    const CompositionMatrix matrix = build_truncation(centered, args.n);
    const std::vector<Complex> computed = eigenvalues(matrix);

    HandlerResult result;
    result.report.command = "truncate";
    result.report.inputs = {{"map", args.map},
                            {"N", args.n},
                            {"compare", args.compare},
                            {"k", args.k},
                            {"tol", args.tol}};
    result.report.outputs = {{"N", args.n},
                             {"z0", j_complex(fp.z0.value())},
                             {"multiplier", j_complex(fp.multiplier)},
                             {"computed", j_complex_list(computed)}};

    if (args.compare) {
        const SpectrumSet predicted =
            theoretical_spectrum(fp.multiplier, std::max(args.k, 1), 0.0);
        const int k = std::min({args.k, static_cast<int>(predicted.points.size()),
                                static_cast<int>(computed.size())});
        const MatchReport match = compare_spectra(computed, predicted, k, args.tol);
        result.report.outputs["predicted"] = j_complex_list(predicted.top(k));
        result.report.outputs["max_distance"] = match.max_distance;
        result.report.outputs["pass"] = match.pass;
        result.report.status = match.pass ? "pass" : "fail";

        result.csv = "index,predicted_re,predicted_im,computed_re,computed_im,distance\n";
        for (std::size_t i = 0; i < match.pairs.size(); ++i) {
            const auto& [want, got] = match.pairs[i];
            result.csv += std::to_string(i) + "," + csv_number(want.real()) + "," +
                          csv_number(want.imag()) + "," + csv_number(got.real()) + "," +
                          csv_number(got.imag()) + "," + csv_number(std::abs(want - got)) + "\n";
        }
    } else {
        result.csv = "index,computed_re,computed_im\n";
        for (std::size_t i = 0; i < computed.size(); ++i) {
            result.csv += std::to_string(i) + "," + csv_number(computed[i].real()) + "," +
                          csv_number(computed[i].imag()) + "\n";
        }
    }
    return result;
}

struct CompactArgs {
    std::string map;
    double margin = 0.25;
    int samples = 4096;
};

inline HandlerResult run_compact(const CompactArgs& args) {
    const MapExpr m = parse_map(args.map);
    const RangeCheck check = compact_range_check(m, args.margin, args.samples);
    HandlerResult result;
    result.report.command = "compact";
    result.report.inputs = {{"map", args.map},
                            {"margin", args.margin},
                            {"samples", args.samples}};
    result.report.outputs = {{"classification", to_string(check.classification)},
                             {"lower", check.lower},
                             {"upper", check.upper},
                             {"radius", check.radius}};
    switch (check.classification) {
        case RangeClass::Compact: result.report.status = "pass"; break;
        case RangeClass::NotCompact: result.report.status = "fail"; break;
        default: result.report.status = "inconclusive"; break;
    }
    return result;
}

struct AbbaArgs {
    unsigned long seed = 1;
    int trials = 100;
    int dim_min = 2;
    int dim_max = 8;
    double tol = 1e-8;
};

inline HandlerResult run_abba(const AbbaArgs& args) {
    if (args.trials < 1) throw std::invalid_argument("abba: trials must be >= 1");
    if (args.dim_min < 1 || args.dim_max < args.dim_min) {
        throw std::invalid_argument("abba: need 1 <= dim-min <= dim-max");
    }
    std::mt19937_64 rng(args.seed);
    std::uniform_int_distribution<int> dim_dist(args.dim_min, args.dim_max);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    int failures = 0;
    double max_distance = 0.0;
    for (int trial = 0; trial < args.trials; ++trial) {
        const int dim = dim_dist(rng);
        Eigen::MatrixXcd a(dim, dim), b(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                a(r, c) = Complex(entry(rng), entry(rng));
                b(r, c) = Complex(entry(rng), entry(rng));
            }
        }
        // Rank-deficient flavors with semisimple zero eigenvalues: zeroing
        // the same column index on both sides aligns the kernels, and a
        // rank-one factor keeps every product at most rank one.  (Misaligned
        // deficiencies create defective zeros, which QR iteration perturbs
        // to sqrt(eps) -- a threshold artifact, not a spectra mismatch.)
        if (trial % 4 == 2) {
            a.col(trial % dim).setZero();
            b.col(trial % dim).setZero();
        } else if (trial % 4 == 3) {
            Eigen::VectorXcd u(dim), v(dim);
            for (int r = 0; r < dim; ++r) {
                u(r) = Complex(entry(rng), entry(rng));
                v(r) = Complex(entry(rng), entry(rng));
            }
            a = u * v.adjoint();
        }
        const AbBaReport report = ab_ba_report(a, b, args.tol);
        if (!report.ok) ++failures;
        max_distance = std::max(max_distance, report.max_distance);
    }
    HandlerResult result;
    result.report.command = "abba";
    result.report.inputs = {{"seed", args.seed},
                            {"trials", args.trials},
                            {"dim_min", args.dim_min},
                            {"dim_max", args.dim_max},
                            {"tol", args.tol}};
    result.report.outputs = {{"failures", failures},
                             {"max_distance", max_distance},
                             {"pass", failures == 0}};
    result.report.status = failures == 0 ? "pass" : "fail";
    return result;
}

struct ExampleAArgs {
    std::string net = "geometric:10";
    double radius = 0.5;
    int samples = 2048;
    std::string probe = "0.3";
    double limit_tol = 1e-9;
};

inline HandlerResult run_example_a(const ExampleAArgs& args) {
    const BoundaryNet net = parse_net_text(args.net);
    const std::vector<StageEstimate> stages = verify_example_a(net, args.radius, args.samples);
    bool decreasing = true;
    for (std::size_t i = 1; i < stages.size(); ++i) {
        if (!(stages[i].lower < stages[i - 1].lower && stages[i].upper < stages[i - 1].upper)) {
            decreasing = false;
        }
    }
    const DiscPoint probe{parse_complex_text(args.probe)};
    // The stage map at the last stage and the stage limit at the probe point.
    const MapExpr last_stage = psi_stage(tau(), net, net.size());
    const double last_at_probe = std::abs(eval(last_stage, probe));
    const PsiLimitResult limit = psi_limit(tau(), net, probe, args.limit_tol);

    HandlerResult result;
    result.report.command = "example-a";
    result.report.inputs = {{"net", args.net},
                            {"radius", args.radius},
                            {"samples", args.samples},
                            {"probe", j_complex(probe.value())},
                            {"limit_tol", args.limit_tol}};
    json stage_rows = json::array();
    for (std::size_t i = 0; i < stages.size(); ++i) {
        stage_rows.push_back(json{{"k", i + 1},
                                  {"x", stages[i].x},
                                  {"lower", stages[i].lower},
                                  {"upper", stages[i].upper}});
    }
    result.report.outputs = {{"stages", stage_rows},
                             {"strictly_decreasing", decreasing},
                             {"last_stage_at_probe", last_at_probe},
                             {"limit",
                              json{{"converged", limit.converged},
                                   {"value", j_complex(limit.value)},
                                   {"tail_spread", limit.tail_spread}}}};
    result.report.status = (decreasing && limit.converged) ? "pass" : "fail";

    result.csv = "k,x,lower,upper\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
        result.csv += std::to_string(i + 1) + "," + csv_number(stages[i].x) + "," +
                      csv_number(stages[i].lower) + "," + csv_number(stages[i].upper) + "\n";
    }
    return result;
}

struct ExampleBArgs {
    std::string zeros = "geometric:12";
    int count = 0;  // 0: use every zero
};

inline HandlerResult run_example_b(const ExampleBArgs& args) {
    const std::vector<DiscPoint> zeros = parse_points_text(args.zeros);
    const int count = args.count == 0 ? static_cast<int>(zeros.size()) : args.count;
    const SeparationReport report = verify_example_b(zeros, count);
    const bool pass = report.max_identity_gap <= 1e-10 && report.min_d > 0.0;

    HandlerResult result;
    result.report.command = "example-b";
    result.report.inputs = {{"zeros", args.zeros}, {"count", count}};
    json points = json::array();
    for (const DiscPoint& p : report.points) points.push_back(j_complex(p.value()));
    result.report.outputs = {{"points", points},
                             {"d", report.d},
                             {"half_delta", report.half_delta},
                             {"max_identity_gap", report.max_identity_gap},
                             {"min_d", report.min_d},
                             {"delta", report.delta},
                             {"pass", pass}};
    result.report.status = pass ? "pass" : "fail";

    result.csv = "n,z,d_n,half_delta_n\n";
    for (std::size_t i = 0; i < report.d.size(); ++i) {
        result.csv += std::to_string(i + 1) + "," + csv_number(report.points[i].value().real()) +
                      "," + csv_number(report.d[i]) + "," + csv_number(report.half_delta[i]) +
                      "\n";
    }
    return result;
}

struct InterpArgs {
    std::string points = "geometric:8";
    int count = 0;  // 0: use every point
};

inline HandlerResult run_interp(const InterpArgs& args) {
    const std::vector<DiscPoint> points = parse_points_text(args.points);
    const int count = args.count == 0 ? static_cast<int>(points.size()) : args.count;
    const InterpolatingSequence seq = interpolating_check(points, count);

    HandlerResult result;
    result.report.command = "interp";
    result.report.inputs = {{"points", args.points}, {"count", count}};
    json point_rows = json::array();
    for (const DiscPoint& p : seq.points) point_rows.push_back(j_complex(p.value()));
    result.report.outputs = {{"points", point_rows},
                             {"delta_n", seq.delta_n},
                             {"delta", seq.delta}};

    result.csv = "n,re,im,delta_n\n";
    for (std::size_t i = 0; i < seq.delta_n.size(); ++i) {
        result.csv += std::to_string(i + 1) + "," + csv_number(seq.points[i].value().real()) +
                      "," + csv_number(seq.points[i].value().imag()) + "," +
                      csv_number(seq.delta_n[i]) + "\n";
    }
    return result;
}

struct EndoArgs {
    std::string kind;
    std::string map;
    std::string f;
    std::string z = "0";
    std::string net = "geometric:20";
    int power = 1;
    int stage = 0;  // 0: last net stage
};

inline HandlerResult run_endo(const EndoArgs& args) {
    const MapExpr f = parse_map(args.f);
    const DiscPoint z{parse_complex_text(args.z)};

    HandlerResult result;
    result.report.command = "endo";
    result.report.inputs = {{"kind", args.kind},
                            {"f", args.f},
                            {"z", j_complex(z.value())},
                            {"power", args.power}};

    std::optional<EndomorphismModel> model;
    int stage = args.stage;
    if (args.kind == "composition") {
        if (args.map.empty()) throw std::invalid_argument("endo: composition requires --map");
        model = EndomorphismModel::composition(parse_map(args.map));
        result.report.inputs["map"] = args.map;
        if (stage == 0) stage = 1;  // unused by this model
    } else if (args.kind == "rank-one" || args.kind == "generalized") {
        const BoundaryNet net = parse_net_text(args.net);
        if (stage == 0) stage = net.size();
        result.report.inputs["net"] = args.net;
        result.report.inputs["stage"] = stage;
        result.report.outputs["stage_x"] = net.stage(stage);
        // The surrogate point a_{x_k}(z) the model reads through.
        result.report.outputs["surrogate"] = j_complex(lm_surrogate(net, stage, z).value());
        if (args.kind == "rank-one") {
            model = EndomorphismModel::rank_one(net);
        } else {
            if (args.map.empty()) throw std::invalid_argument("endo: generalized requires --map");
            model = EndomorphismModel::generalized(net, parse_map(args.map));
            result.report.inputs["map"] = args.map;
        }
    } else {
        throw std::invalid_argument(
            "endo: --kind must be composition, rank-one, or generalized");
    }

    const Complex value = iterate_endomorphism(*model, f, z, args.power, stage);
    result.report.outputs["value"] = j_complex(value);
    return result;
}

}  // namespace detail

// Parses argv-style arguments (without the program name) and runs the
// selected command.  Never throws: all diagnostics are folded into the
// outcome's exit code and streams.
inline RunOutcome run(const std::vector<std::string>& args) {
    CLI::App app{"analytic self-maps of the disc: spectra, truncations, boundary nets"};
    app.require_subcommand(0, 1);

    std::string out_spec = "json";
    detail::RhoArgs rho_args;
    detail::FixedPointArgs fp_args;
    detail::SpectrumArgs spectrum_args;
    detail::TruncateArgs truncate_args;
    detail::CompactArgs compact_args;
    detail::AbbaArgs abba_args;
    detail::ExampleAArgs example_a_args;
    detail::ExampleBArgs example_b_args;
    detail::InterpArgs interp_args;
    detail::EndoArgs endo_args;

    auto add_out = [&out_spec](CLI::App* cmd) {
        cmd->add_option("--out", out_spec, "json, csv, or an output file path");
    };

    CLI::App* rho = app.add_subcommand("rho", "pseudohyperbolic and hyperbolic distances");
    rho->add_option("--z", rho_args.z, "first point, re[,im]")->required();
    rho->add_option("--w", rho_args.w, "second point, re[,im]")->required();
    add_out(rho);

    CLI::App* fixed = app.add_subcommand("fixed-point", "attracting interior fixed point");
    fixed->add_option("--map", fp_args.map, "map expression")->required();
    fixed->add_option("--tol", fp_args.tol, "residual tolerance");
    add_out(fixed);

    CLI::App* spectrum = app.add_subcommand("spectrum", "predicted operator spectrum");
    spectrum->add_option("--mu", spectrum_args.mu, "multiplier, re[,im]");
    spectrum->add_option("--map", spectrum_args.map, "derive the multiplier from this map");
    spectrum->add_option("--n-max", spectrum_args.n_max, "largest power retained");
    spectrum->add_option("--eps", spectrum_args.eps, "drop powers below this modulus");
    add_out(spectrum);

    CLI::App* truncate = app.add_subcommand("truncate", "finite-section eigenvalues");
    truncate->add_option("--map", truncate_args.map, "map expression")->required();
    truncate->add_option("--N", truncate_args.n, "truncation dimension");
    truncate->add_flag("--compare", truncate_args.compare, "match against the prediction");
    truncate->add_option("--k", truncate_args.k, "points compared");
    truncate->add_option("--tol", truncate_args.tol, "match tolerance");
    add_out(truncate);

    CLI::App* compact = app.add_subcommand("compact", "range compactness classification");
    compact->add_option("--map", compact_args.map, "map expression")->required();
    compact->add_option("--margin", compact_args.margin, "required boundary clearance");
    compact->add_option("--samples", compact_args.samples, "circle sample count");
    add_out(compact);

    CLI::App* abba = app.add_subcommand("abba", "nonzero spectra of AB versus BA");
    abba->add_option("--seed", abba_args.seed, "RNG seed");
    abba->add_option("--trials", abba_args.trials, "random pairs tested");
    abba->add_option("--dim-min", abba_args.dim_min, "smallest dimension");
    abba->add_option("--dim-max", abba_args.dim_max, "largest dimension");
    abba->add_option("--tol", abba_args.tol, "match tolerance");
    add_out(abba);

    CLI::App* example_a = app.add_subcommand("example-a", "stage collapse of the singular map");
    example_a->add_option("--net", example_a_args.net, "geometric:K or x1,x2,...");
    example_a->add_option("--radius", example_a_args.radius, "sup norms taken on |z| <= r");
    example_a->add_option("--samples", example_a_args.samples, "circle sample count");
    example_a->add_option("--probe", example_a_args.probe, "stage-limit probe point");
    example_a->add_option("--limit-tol", example_a_args.limit_tol, "stage-limit tolerance");
    add_out(example_a);

    CLI::App* example_b = app.add_subcommand("example-b", "separation of a Blaschke zero set");
    example_b->add_option("--zeros", example_b_args.zeros, "geometric:n or a list");
    example_b->add_option("--count", example_b_args.count, "zeros used (0 = all)");
    add_out(example_b);

    CLI::App* interp = app.add_subcommand("interp", "interpolating-sequence separation");
    interp->add_option("--points", interp_args.points, "geometric:n or a list");
    interp->add_option("--count", interp_args.count, "points used (0 = all)");
    add_out(interp);

    CLI::App* endo = app.add_subcommand("endo", "apply an endomorphism model");
    endo->add_option("--kind", endo_args.kind, "composition, rank-one, or generalized")
        ->required();
    endo->add_option("--map", endo_args.map, "model map (omega or the compact-range map)");
    endo->add_option("--f", endo_args.f, "test function")->required();
    endo->add_option("--z", endo_args.z, "evaluation point, re[,im]");
    endo->add_option("--net", endo_args.net, "geometric:K or x1,x2,...");
    endo->add_option("--power", endo_args.power, "apply the model this many times");
    endo->add_option("--stage", endo_args.stage, "net stage (0 = last)");
    add_out(endo);

    RunOutcome outcome;
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("discendo");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success&) {
        outcome.out = app.help();
        return outcome;
    } catch (const CLI::ParseError& e) {
        outcome.err = std::string(e.what()) + "\nrun 'discendo --help' for usage\n";
        outcome.exit_code = 2;
        return outcome;
    }

    if (app.get_subcommands().empty()) {
        outcome.err = app.help() + "\nerror: a command is required\n";
        outcome.exit_code = 2;
        return outcome;
    }

    detail::HandlerResult handled;
    const auto started = std::chrono::steady_clock::now();
    try {
        if (rho->parsed()) handled = detail::run_rho(rho_args);
        else if (fixed->parsed()) handled = detail::run_fixed_point(fp_args);
        else if (spectrum->parsed()) handled = detail::run_spectrum(spectrum_args);
        else if (truncate->parsed()) handled = detail::run_truncate(truncate_args);
        else if (compact->parsed()) handled = detail::run_compact(compact_args);
        else if (abba->parsed()) handled = detail::run_abba(abba_args);
        else if (example_a->parsed()) handled = detail::run_example_a(example_a_args);
        else if (example_b->parsed()) handled = detail::run_example_b(example_b_args);
        else if (interp->parsed()) handled = detail::run_interp(interp_args);
        else handled = detail::run_endo(endo_args);
    } catch (const convergence_error& e) {
        // The analysis ran and has a definite negative answer.
        handled.report.command = app.get_subcommands().front()->get_name();
        if (!handled.report.inputs.is_object()) handled.report.inputs = json::object();
        handled.report.outputs = {{"error", e.what()}};
        handled.report.status = "fail";
        handled.csv.clear();
    } catch (const std::exception& e) {
        outcome.err = std::string("error: ") + e.what() + "\n";
        outcome.exit_code = 2;
        return outcome;
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    handled.report.wall_time_s = elapsed.count();

    // Encode and route the report.
    std::string payload;
    if (out_spec == "csv" || (out_spec.size() > 4 && out_spec.ends_with(".csv"))) {
        if (handled.csv.empty()) {
            outcome.err = "error: no CSV form for this command\n";
            outcome.exit_code = 2;
            return outcome;
        }
        payload = handled.csv;
    } else {
        payload = handled.report.to_json().dump(2) + "\n";
    }
    if (out_spec == "json" || out_spec == "csv") {
        outcome.out = payload;
    } else {
        std::ofstream file(out_spec, std::ios::binary);
        if (!file) {
            outcome.err = "error: cannot open output file '" + out_spec + "'\n";
            outcome.exit_code = 2;
            return outcome;
        }
        file << payload;
    }
    char timing[64];
    std::snprintf(timing, sizeof(timing), "# wall_time_s %.6f\n", handled.report.wall_time_s);
    outcome.err += timing;
    outcome.exit_code = handled.report.status == "pass" ? 0 : 1;
    return outcome;
}

}  // namespace discendo::cli
