// Command line front end: landscape reports, phase diagram traces, exact
// finite-N marginals, convergence experiments, and configuration sampling.
#include <cinttypes>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rfcw/errors.hpp"
#include "rfcw/experiments.hpp"
#include "rfcw/marginals.hpp"
#include "rfcw/phase.hpp"

using nlohmann::json;
using namespace rfcw;

namespace {

constexpr const char* kVersion = "rfcw/1.0.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
    return buf;
}

FieldSpec parse_field(const std::string& text) {
    const auto parse_double = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw ArgumentError("--field: bad number '" + s + "'");
        }
        if (pos != s.size()) throw ArgumentError("--field: bad number '" + s + "'");
        return v;
    };
    if (text.rfind("dichotomous:", 0) == 0)
        return FieldSpec::dichotomous(parse_double(text.substr(12)));
    if (text.rfind("discrete:", 0) == 0) {
        std::vector<FieldAtom> atoms;
        std::string rest = text.substr(9);
        std::size_t start = 0;
        while (start <= rest.size()) {
            std::size_t comma = rest.find(',', start);
            if (comma == std::string::npos) comma = rest.size();
            const std::string item = rest.substr(start, comma - start);
            const std::size_t colon = item.find(':');
            if (colon == std::string::npos)
                throw ArgumentError("--field: discrete atoms must look like v:p");
            atoms.push_back(
                {parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1))});
            start = comma + 1;
        }
        return FieldSpec(text, std::move(atoms));
    }
    throw ArgumentError("--field: expected dichotomous:<h> or discrete:<v:p,...>");
}

// line-buffered writer so CSV goes to --out or stdout identically
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::fopen(path.c_str(), "wb");
            if (!file_) throw ArgumentError("--out: cannot open '" + path + "'");
        }
    }
    ~Output() {
        if (file_) std::fclose(file_);
    }
    void line(const std::string& s) {
        std::fputs(s.c_str(), file_ ? file_ : stdout);
        std::fputc('\n', file_ ? file_ : stdout);
    }

private:
    std::FILE* file_ = nullptr;
};

struct CommonOpts {
    std::string field_text = "dichotomous:0.25";
    double beta = 1.0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format = "csv";
};

void add_output(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out_path, "output path (default stdout)");
    cmd->add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--field", opts.field_text, "dichotomous:<h> or discrete:<v:p,...>");
    cmd->add_option("--beta", opts.beta, "inverse temperature")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "base seed")->capture_default_str();
    add_output(cmd, opts);
}

json config_echo(const CommonOpts& opts) {
    return {{"field", opts.field_text}, {"beta", opts.beta}, {"seed", opts.seed},
            {"format", opts.format}};
}

void emit_json(Output& out, json j) {
    j["version"] = kVersion;
    out.line(j.dump(2));
}

std::string convergence_csv_row(const ConvergenceRow& r) {
    return std::to_string(r.n) + "," + std::to_string(r.k) + "," + fmt(r.seed) + "," +
           std::to_string(r.j_index) + "," + fmt(r.kl) + "," + fmt(r.tv);
}

json convergence_json_row(const ConvergenceRow& r) {
    return {{"n", r.n}, {"k", r.k}, {"seed", r.seed}, {"j_index", r.j_index},
            {"kl", r.kl}, {"tv", r.tv}};
}

int run_landscape(const CommonOpts& opts) {
    Output out(opts.out_path);
    const auto spec = parse_field(opts.field_text);
    const auto report = find_global_maxima(spec, opts.beta);
    if (opts.format == "csv") {
        out.line("# rfcw-csv v1 landscape");
        out.line("# field=" + opts.field_text + " beta=" + fmt(opts.beta) +
                 " tail_radius=" + fmt(report.tail_radius));
        out.line("location,value,degeneracy_n,leading_derivative,curvature");
        for (const auto& m : report.maxima)
            out.line(fmt(m.location) + "," + fmt(m.value) + "," +
                     std::to_string(m.degeneracy_n) + "," + fmt(m.leading_derivative) + "," +
                     fmt(m.curvature));
        return 0;
    }
    json rows = json::array();
    for (const auto& m : report.maxima)
        rows.push_back({{"location", m.location},
                        {"value", m.value},
                        {"degeneracy_n", m.degeneracy_n},
                        {"leading_derivative", m.leading_derivative},
                        {"curvature", m.curvature}});
    emit_json(out, {{"command", "landscape"},
                    {"config", config_echo(opts)},
                    {"tail_radius", report.tail_radius},
                    {"maxima", rows}});
    return 0;
}

int run_phase_diagram(const CommonOpts& opts, double h_max, int steps) {
    Output out(opts.out_path);
    const auto line = trace_phase_line(h_max, steps);
    const auto order_name = [](CriticalPoint::Order o) {
        return o == CriticalPoint::Order::second ? "second" : "first";
    };
    if (opts.format == "csv") {
        out.line("# rfcw-csv v1 phase-diagram");
        out.line("# h_max=" + fmt(h_max) + " steps=" + std::to_string(steps));
        out.line("h,beta_crit,order");
        for (const auto& p : line)
            out.line(fmt(p.h_field) + "," + fmt(p.beta_crit) + "," + order_name(p.order));
        return 0;
    }
    json rows = json::array();
    for (const auto& p : line)
        rows.push_back(
            {{"h", p.h_field}, {"beta_crit", p.beta_crit}, {"order", order_name(p.order)}});
    emit_json(out, {{"command", "phase-diagram"},
                    {"config", {{"h_max", h_max}, {"steps", steps}, {"format", opts.format}}},
                    {"rows", rows}});
    return 0;
}

int run_marginal(const CommonOpts& opts, int n, int k) {
    Output out(opts.out_path);
    const auto spec = parse_field(opts.field_text);
    const ModelParams params{opts.beta, n};
    const auto field = sample_field(spec, static_cast<std::size_t>(n), opts.seed);
    const auto quad = default_quadrature(params, field);
    const auto table = marginal_quadrature(params, field, k, quad);
    const auto report = find_global_maxima(spec, opts.beta);
    const auto j = select_j_index(field, spec, opts.beta, report);
    const std::span<const double> prefix(field.values.data(), static_cast<std::size_t>(k));
    const auto rho = predicted_product(opts.beta, report, j, prefix);
    const double y_star = report.maxima[j].location;
    if (opts.format == "csv") {
        out.line("# rfcw-csv v1 marginal");
        out.line("# field=" + opts.field_text + " beta=" + fmt(opts.beta) + " n=" +
                 std::to_string(n) + " k=" + std::to_string(k) + " seed=" + fmt(opts.seed) +
                 " j_index=" + std::to_string(j) + " y_star=" + fmt(y_star));
        out.line("word,mu,rho");
        for (std::uint32_t i = 0; i < table.size(); ++i)
            out.line(SpinWord::from_index(i, k).to_string() + "," + fmt(table[i]) + "," +
                     fmt(rho[i]));
        return 0;
    }
    json rows = json::array();
    for (std::uint32_t i = 0; i < table.size(); ++i)
        rows.push_back({{"word", SpinWord::from_index(i, k).to_string()},
                        {"mu", table[i]},
                        {"rho", rho[i]}});
    json config = config_echo(opts);
    config["n"] = n;
    config["k"] = k;
    emit_json(out, {{"command", "marginal"},
                    {"config", config},
                    {"j_index", j},
                    {"y_star", y_star},
                    {"rows", rows}});
    return 0;
}

ExperimentConfig make_experiment(const CommonOpts& opts, const std::vector<int>& n_grid, int k,
                                 std::optional<double> k_alpha, int replicas) {
    return ExperimentConfig{parse_field(opts.field_text),
                            opts.beta,
                            n_grid,
                            k_alpha ? KRule::power(*k_alpha) : KRule::fixed(k),
                            replicas,
                            opts.seed,
                            std::nullopt};
}

int run_chaos_scan(const ExperimentConfig& config, const CommonOpts& opts) {
    Output out(opts.out_path);
    const auto rows = chaos_convergence_scan(config);
    if (opts.format == "csv") {
        out.line("# rfcw-csv v1 chaos-scan");
        out.line("# field=" + opts.field_text + " beta=" + fmt(opts.beta) + " seed=" +
                 fmt(opts.seed) + " replicas=" + std::to_string(config.replicas));
        out.line("n,k,seed,j_index,kl,tv");
        for (const auto& r : rows) out.line(convergence_csv_row(r));
        return 0;
    }
    json jrows = json::array();
    for (const auto& r : rows) jrows.push_back(convergence_json_row(r));
    json config_j = config_echo(opts);
    config_j["n_grid"] = config.n_grid;
    config_j["replicas"] = config.replicas;
    emit_json(out, {{"command", "chaos-scan"}, {"config", config_j}, {"rows", jrows}});
    return 0;
}

int run_jindex_stats(const ExperimentConfig& config, const CommonOpts& opts) {
    Output out(opts.out_path);
    const auto report = j_index_statistics(config);
    if (opts.format == "csv") {
        out.line("# rfcw-csv v1 jindex-stats");
        std::string counts = "# counts=";
        for (std::size_t i = 0; i < report.counts.size(); ++i)
            counts += (i ? "," : "") + std::to_string(report.counts[i]);
        out.line(counts);
        out.line("n,k,seed,j_index,kl,tv,tv_other");
        for (const auto& r : report.rows) {
            const ConvergenceRow base{r.n, r.k, r.seed, r.j_index, r.kl, r.tv};
            out.line(convergence_csv_row(base) + "," + fmt(r.tv_other));
        }
        return 0;
    }
    json jrows = json::array();
    for (const auto& r : report.rows) {
        const ConvergenceRow base{r.n, r.k, r.seed, r.j_index, r.kl, r.tv};
        json jr = convergence_json_row(base);
        jr["tv_other"] = r.tv_other;
        jrows.push_back(jr);
    }
    json config_j = config_echo(opts);
    config_j["n_grid"] = config.n_grid;
    config_j["replicas"] = config.replicas;
    emit_json(out, {{"command", "jindex-stats"},
                    {"config", config_j},
                    {"counts", report.counts},
                    {"rows", jrows}});
    return 0;
}

int run_clt(const CommonOpts& opts, double y0, int n, int replicas) {
    Output out(opts.out_path);
    const auto spec = parse_field(opts.field_text);
    const auto diag = clt_diagnostic(spec, opts.beta, y0, n, replicas, opts.seed);
    if (opts.format == "csv") {
        out.line("# rfcw-csv v1 clt");
        out.line("# field=" + opts.field_text + " beta=" + fmt(opts.beta) + " y0=" + fmt(y0) +
                 " n=" + std::to_string(n) + " seed=" + fmt(opts.seed));
        out.line("replicas,empirical_mean,empirical_variance,analytic_variance");
        out.line(std::to_string(diag.replicas) + "," + fmt(diag.empirical_mean) + "," +
                 fmt(diag.empirical_variance) + "," + fmt(diag.analytic_variance));
        return 0;
    }
    json config = config_echo(opts);
    config["y0"] = y0;
    config["n"] = n;
    config["replicas"] = replicas;
    emit_json(out, {{"command", "clt"},
                    {"config", config},
                    {"replicas", diag.replicas},
                    {"empirical_mean", diag.empirical_mean},
                    {"empirical_variance", diag.empirical_variance},
                    {"analytic_variance", diag.analytic_variance}});
    return 0;
}

int run_sample(const CommonOpts& opts, int n, int n_samples) {
    Output out(opts.out_path);
    const auto spec = parse_field(opts.field_text);
    const ModelParams params{opts.beta, n};
    const auto field = sample_field(spec, static_cast<std::size_t>(n), opts.seed);
    const auto quad = default_quadrature(params, field);
    const auto draws =
        exact_sample(params, field, quad, static_cast<std::size_t>(n_samples), opts.seed + 1);
    const auto config_string = [](const std::vector<std::int8_t>& c) {
        std::string s(c.size(), '+');
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] < 0) s[i] = '-';
        return s;
    };
    if (opts.format == "csv") {
        out.line("# rfcw-csv v1 sample");
        out.line("# field=" + opts.field_text + " beta=" + fmt(opts.beta) + " n=" +
                 std::to_string(n) + " seed=" + fmt(opts.seed));
        out.line("index,config");
        for (std::size_t i = 0; i < draws.size(); ++i)
            out.line(std::to_string(i) + "," + config_string(draws[i]));
        return 0;
    }
    json rows = json::array();
    for (const auto& d : draws) rows.push_back(config_string(d));
    json config = config_echo(opts);
    config["n"] = n;
    config["n_samples"] = n_samples;
    emit_json(out, {{"command", "sample"}, {"config", config}, {"configs", rows}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random field Curie-Weiss marginals, landscape, and experiments"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* landscape = app.add_subcommand("landscape", "report the global maxima of G");
    add_common(landscape, opts);

    auto* phase = app.add_subcommand("phase-diagram", "trace the critical line over h");
    double h_max = 0.45;
    int steps = 50;
    phase->add_option("--h-max", h_max, "largest h on the grid")->capture_default_str();
    phase->add_option("--steps", steps, "number of grid intervals")->capture_default_str();
    add_output(phase, opts);

    auto* marginal = app.add_subcommand("marginal", "exact k-site marginal and its product law");
    int n = 100, k = 1;
    marginal->add_option("--n", n, "system size")->required();
    marginal->add_option("--k", k, "marginal word length")->capture_default_str();
    add_common(marginal, opts);

    auto* scan = app.add_subcommand("chaos-scan", "KL/TV decay over an N grid");
    std::vector<int> n_grid;
    std::optional<double> k_alpha;
    int replicas = 1;
    scan->add_option("--n-grid", n_grid, "N values, e.g. 250 1000 4000")
        ->required()
        ->delimiter(',');
    scan->add_option("--k", k, "fixed marginal word length")->capture_default_str();
    scan->add_option("--k-alpha", k_alpha, "growth rule k = ceil(N^alpha), alpha in (0, 1/2)");
    scan->add_option("--replicas", replicas, "independent field draws per N")
        ->capture_default_str();
    add_common(scan, opts);

    auto* jstats = app.add_subcommand("jindex-stats", "random index selection statistics");
    jstats->add_option("--n-grid", n_grid, "N values")->required()->delimiter(',');
    jstats->add_option("--k", k, "fixed marginal word length")->capture_default_str();
    jstats->add_option("--replicas", replicas, "independent field draws per N")
        ->capture_default_str();
    add_common(jstats, opts);

    auto* clt = app.add_subcommand("clt", "fluctuation scaling diagnostic at y0");
    double y0 = 0.0;
    clt->add_option("--y0", y0, "evaluation point")->required();
    clt->add_option("--n", n, "system size")->required();
    clt->add_option("--replicas", replicas, "field draws (>= 100)")->capture_default_str();
    add_common(clt, opts);

    auto* sample = app.add_subcommand("sample", "draw exact configurations");
    int n_samples = 100;
    sample->add_option("--n", n, "system size")->required();
    sample->add_option("--n-samples", n_samples, "number of configurations")
        ->capture_default_str();
    add_common(sample, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(landscape)) return run_landscape(opts);
        if (app.got_subcommand(phase)) return run_phase_diagram(opts, h_max, steps);
        if (app.got_subcommand(marginal)) return run_marginal(opts, n, k);
        if (app.got_subcommand(scan))
            return run_chaos_scan(make_experiment(opts, n_grid, k, k_alpha, replicas), opts);
        if (app.got_subcommand(jstats))
            return run_jindex_stats(make_experiment(opts, n_grid, k, std::nullopt, replicas),
                                    opts);
        if (app.got_subcommand(clt)) return run_clt(opts, y0, n, replicas);
        if (app.got_subcommand(sample)) return run_sample(opts, n, n_samples);
    } catch (const ArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const CapacityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const ClassificationError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
