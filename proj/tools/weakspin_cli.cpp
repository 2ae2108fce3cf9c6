// Command-line front end: emits CSV or JSON tables for the conditional
// rotation curve, seeded outcome sampling, and the source-model consistency
// report.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "weakspin/bloch.hpp"
#include "weakspin/cnl.hpp"
#include "weakspin/pointer.hpp"
#include "weakspin/weak_measurement.hpp"

namespace {

using nlohmann::ordered_json;
using namespace weakspin;

constexpr std::uint64_t kDefaultSeed = 42;
constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Configuration problems exit with status 2; numerical failures with 1.
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    char trailing = '\0';
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.min, &g.max, &g.count,
                    &trailing) != 3) {
        throw UsageError("grid spec must be min:max:count, got '" + text + "'");
    }
    if (g.count < 2) throw UsageError("grid count must be >= 2");
    if (!(g.min < g.max)) throw UsageError("grid min must be < max");
    return g;
}

// Endpoint-exact grid; symmetric ranges with odd counts hit 0 exactly.
std::vector<double> linspace(const GridSpec& g) {
    std::vector<double> xs(g.count);
    for (int i = 0; i < g.count; ++i) {
        xs[i] = ((g.count - 1 - i) * g.min + i * g.max) / (g.count - 1);
    }
    return xs;
}

std::string fmt12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

BlochDirection parse_direction_deg(const std::string& text) {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    char trailing = '\0';
    if (std::sscanf(text.c_str(), "%lf,%lf%c", &theta_deg, &phi_deg, &trailing) != 2) {
        throw UsageError("direction must be theta,phi in degrees, got '" + text + "'");
    }
    if (theta_deg < 0.0 || theta_deg > 180.0) {
        throw UsageError("direction theta must lie in [0, 180] degrees");
    }
    return make_direction(theta_deg / kDegPerRad, phi_deg / kDegPerRad);
}

int quad_order_from_env() {
    const char* env = std::getenv("WEAKSPIN_QUAD_ORDER");
    if (env == nullptr || *env == '\0') return 64;
    char* end = nullptr;
    const long order = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || order < 16 || order > 4096) {
        throw UsageError("WEAKSPIN_QUAD_ORDER must be an integer in [16, 4096]");
    }
    return static_cast<int>(order);
}

struct Options {
    std::string command;
    double theta_p_deg = 90.0;
    double coupling = 1.0;
    double width = 1.0;
    std::string alpha_grid = "0:180:19";
    std::string ql_grid;  // defaulted per command from the coupling
    std::string family = "uniform";
    std::string u_dir = "0,0";
    std::uint64_t samples = 10000;
    std::uint64_t seed = kDefaultSeed;
    std::string out_path = "-";
    std::string format = "csv";
    bool normalized = false;
    double tolerance = 1e-3;
    double f_scale = 1.0;
    int quad_order = 64;
};

struct OutputDoc {
    ordered_json config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    ordered_json summary;
};

std::string scalar_text(const ordered_json& value) {
    if (value.is_number_float()) return fmt12(value.get<double>());
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

void write_csv(std::ostream& os, const OutputDoc& doc) {
    for (std::size_t c = 0; c < doc.columns.size(); ++c) {
        os << (c ? "," : "") << doc.columns[c];
    }
    os << '\n';
    for (const std::vector<double>& row : doc.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << fmt12(row[c]);
        }
        os << '\n';
    }
    for (const auto& [key, value] : doc.summary.items()) {
        os << "# " << key << " = " << scalar_text(value) << '\n';
    }
}

void write_json(std::ostream& os, const OutputDoc& doc) {
    ordered_json root;
    root["config"] = doc.config;
    ordered_json rows = ordered_json::array();
    for (const std::vector<double>& row : doc.rows) {
        ordered_json r;
        for (std::size_t c = 0; c < doc.columns.size(); ++c) {
            r[doc.columns[c]] = row[c];
        }
        rows.push_back(std::move(r));
    }
    root["rows"] = std::move(rows);
    root["summary"] = doc.summary;
    os << root.dump(2) << '\n';
}

ordered_json grid_json(const GridSpec& g) {
    return {{"min", g.min}, {"max", g.max}, {"count", g.count}};
}

OutputDoc run_fig1(const Options& opt) {
    const WmConfig cfg{opt.coupling, opt.width};
    const GridSpec grid = parse_grid(opt.ql_grid);
    const double theta_p = opt.theta_p_deg / kDegPerRad;

    OutputDoc doc;
    doc.config = {
        {"command", "fig1"},          {"theta_p_deg", opt.theta_p_deg},
        {"coupling_a", opt.coupling}, {"width", opt.width},
        {"q1_grid", grid_json(grid)}, {"normalized", opt.normalized},
    };
    doc.columns = {opt.normalized ? "q1_over_a" : "q1", "f", "delta_theta_deg"};

    double min_dt = 0.0;
    double max_dt = 0.0;
    bool first = true;
    for (double q1 : linspace(grid)) {
        const double f = f_ratio(cfg, q1).value;
        const double dt_deg = delta_theta(theta_p, cfg, q1) * kDegPerRad;
        doc.rows.push_back({opt.normalized ? q1 / cfg.coupling_a : q1, f, dt_deg});
        min_dt = first ? dt_deg : std::min(min_dt, dt_deg);
        max_dt = first ? dt_deg : std::max(max_dt, dt_deg);
        first = false;
    }
    doc.summary = {{"min_delta_theta_deg", min_dt}, {"max_delta_theta_deg", max_dt}};
    return doc;
}

OutputDoc run_sample(const Options& opt) {
    if (opt.samples == 0) throw UsageError("--samples must be >= 1");
    const WmConfig cfg{opt.coupling, opt.width};
    const double theta_p = opt.theta_p_deg / kDegPerRad;
    const SpinState prior = ket_from_direction(make_direction(theta_p, 0.0));
    std::mt19937_64 rng(opt.seed);

    OutputDoc doc;
    doc.config = {
        {"command", "sample"},        {"theta_p_deg", opt.theta_p_deg},
        {"coupling_a", opt.coupling}, {"width", opt.width},
        {"samples", opt.samples},     {"seed", opt.seed},
        {"normalized", opt.normalized},
    };
    doc.columns = {opt.normalized ? "q1_over_a" : "q1", "f", "theta_q_deg"};

    double total = 0.0;
    std::uint64_t plus = 0;
    doc.rows.reserve(opt.samples);
    for (std::uint64_t i = 0; i < opt.samples; ++i) {
        const WmOutcome outcome = sample_outcome(prior, cfg, rng);
        const double theta_q_deg =
            direction_from_ket(apply_wm(prior, cfg, outcome.q1)).theta * kDegPerRad;
        doc.rows.push_back({opt.normalized ? outcome.q1 / cfg.coupling_a : outcome.q1,
                            outcome.f, theta_q_deg});
        total += outcome.q1;
        if (nm_limit_classify(outcome) == 1) ++plus;
    }
    const double n = static_cast<double>(opt.samples);
    doc.summary = {{"mean_q1", total / n},
                   {"fraction_plus", static_cast<double>(plus) / n}};
    return doc;
}

OutputDoc run_cnl_test(const Options& opt) {
    const WmConfig cfg{opt.coupling, opt.width};

    SourceDistribution dist;
    if (opt.family == "uniform") {
        dist.kind = SourceFamily::kUniformAnticorrelated;
    } else if (opt.family == "delta") {
        dist.kind = SourceFamily::kDeltaPair;
        dist.u0 = parse_direction_deg(opt.u_dir);
        dist.v0 = antipode(dist.u0);
    } else if (opt.family == "product") {
        dist.kind = SourceFamily::kProductUniform;
    } else {
        throw UsageError("unknown --f-family '" + opt.family +
                         "'; valid names: uniform, delta, product");
    }
    dist.scale = opt.f_scale;

    const GridSpec alpha_spec = parse_grid(opt.alpha_grid);
    const GridSpec ql_spec = parse_grid(opt.ql_grid);
    const std::vector<double> alpha_deg = linspace(alpha_spec);
    const std::vector<double> qls = linspace(ql_spec);
    std::vector<double> alpha_rad(alpha_deg.size());
    for (std::size_t i = 0; i < alpha_deg.size(); ++i) {
        alpha_rad[i] = alpha_deg[i] / kDegPerRad;
    }

    const SphereQuadrature quad{opt.quad_order, opt.quad_order};
    const CnlReport report = cnl_test(dist, cfg, alpha_rad, qls, quad);

    OutputDoc doc;
    doc.config = {
        {"command", "cnl-test"},
        {"coupling_a", opt.coupling},
        {"width", opt.width},
        {"f_family", family_name(dist.kind)},
        {"alpha_grid_deg", grid_json(alpha_spec)},
        {"ql_grid", grid_json(ql_spec)},
        {"quad_order", opt.quad_order},
        {"tolerance", opt.tolerance},
        {"normalized", opt.normalized},
    };
    if (dist.kind == SourceFamily::kDeltaPair) {
        doc.config["u_dir_deg"] = {{"theta", dist.u0.theta * kDegPerRad},
                                   {"phi", dist.u0.phi * kDegPerRad}};
    }
    doc.columns = {"alpha_deg", opt.normalized ? "ql_over_a" : "q_l",
                   "f",         "lhs",
                   "rhs",       "abs_diff"};

    std::size_t argmax_row = 0;
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
        const CnlRow& row = report.rows[r];
        const double a_deg = alpha_deg[r / qls.size()];
        doc.rows.push_back({a_deg, opt.normalized ? row.q_l / cfg.coupling_a : row.q_l,
                            row.f, row.lhs, row.rhs, row.abs_diff});
        if (row.abs_diff > report.rows[argmax_row].abs_diff) argmax_row = r;
    }

    const CnlRow& worst = report.rows[argmax_row];
    const bool violated = report.violated(opt.tolerance);
    doc.summary = {
        {"max_abs_diff", report.summary.max_abs_diff},
        {"argmax_alpha_deg", alpha_deg[argmax_row / qls.size()]},
        {"argmax_ql", opt.normalized ? worst.q_l / cfg.coupling_a : worst.q_l},
        {"tolerance", opt.tolerance},
        {"verdict", violated ? "violated" : "consistent at tested settings"},
    };
    return doc;
}

void emit(std::ostream& os, const OutputDoc& doc, const std::string& format) {
    if (format == "json") {
        write_json(os, doc);
    } else {
        write_csv(os, doc);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "weakspin: conditional spin rotations from pointer measurements and "
        "the crypto-nonlocal source-model consistency test"};
    Options opt;
    app.add_option("--command", opt.command, "fig1 | sample | cnl-test")->required();
    app.add_option("--theta-p", opt.theta_p_deg, "prior polar angle in degrees [0, 180]");
    app.add_option("--coupling", opt.coupling, "pointer displacement a (length units)");
    app.add_option("--width", opt.width, "pointer width (length units)");
    app.add_option("--alpha-grid", opt.alpha_grid,
                   "rotation grid min:max:count in degrees (cnl-test)");
    CLI::Option* ql_opt = app.add_option(
        "--ql-grid", opt.ql_grid,
        "pointer-reading grid min:max:count (fig1 default -3a:3a:121, cnl-test "
        "default -2a:2a:21)");
    app.add_option("--f-family", opt.family, "source family: uniform | delta | product");
    app.add_option("--u-dir", opt.u_dir, "delta-family direction theta,phi in degrees");
    app.add_option("--samples", opt.samples, "number of sampled outcomes");
    app.add_option("--seed", opt.seed, "rng seed (default 42)");
    app.add_option("--out", opt.out_path, "output path, '-' for stdout");
    app.add_option("--format", opt.format, "csv | json");
    app.add_flag("--normalized", opt.normalized,
                 "report pointer readings in units of a");
    app.add_option("--tolerance", opt.tolerance, "refutation tolerance on |lhs - rhs|");
    app.add_option("--f-scale", opt.f_scale,
                   "density scale of F; values != 1 make the source non-normalized");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!(opt.coupling > 0.0) || !(opt.width > 0.0)) {
            throw UsageError("--coupling and --width must be > 0");
        }
        if (opt.theta_p_deg < 0.0 || opt.theta_p_deg > 180.0) {
            throw UsageError("--theta-p must lie in [0, 180] degrees");
        }
        if (!(opt.tolerance > 0.0)) throw UsageError("--tolerance must be > 0");
        if (opt.format != "csv" && opt.format != "json") {
            throw UsageError("--format must be csv or json");
        }
        opt.quad_order = quad_order_from_env();
        if (ql_opt->count() == 0) {
            std::ostringstream spec;
            if (opt.command == "fig1") {
                spec << -3.0 * opt.coupling << ":" << 3.0 * opt.coupling << ":121";
            } else {
                spec << -2.0 * opt.coupling << ":" << 2.0 * opt.coupling << ":21";
            }
            opt.ql_grid = spec.str();
        }

        OutputDoc doc;
        if (opt.command == "fig1") {
            doc = run_fig1(opt);
        } else if (opt.command == "sample") {
            doc = run_sample(opt);
        } else if (opt.command == "cnl-test") {
            doc = run_cnl_test(opt);
        } else {
            throw UsageError("unknown --command '" + opt.command +
                             "'; valid: fig1, sample, cnl-test");
        }

        if (opt.out_path == "-") {
            emit(std::cout, doc, opt.format);
        } else {
            std::ofstream out(opt.out_path);
            if (!out) throw UsageError("cannot open output path '" + opt.out_path + "'");
            emit(out, doc, opt.format);
            if (doc.summary.contains("verdict")) {
                std::cout << "verdict: " << doc.summary["verdict"].get<std::string>()
                          << " (max |lhs - rhs| = "
                          << fmt12(doc.summary["max_abs_diff"].get<double>()) << ")\n";
            }
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
