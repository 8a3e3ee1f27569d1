#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmedge/bessel.hpp"
#include "rmedge/dyson.hpp"
#include "rmedge/edge_stats.hpp"
#include "rmedge/ensembles.hpp"
#include "rmedge/flow.hpp"
#include "rmedge/ginibre_kernel.hpp"
#include "rmedge/girko.hpp"
#include "rmedge/parallel.hpp"
#include "rmedge/spectral.hpp"
#include "rmedge/stats.hpp"
#include "rmedge/tail_kernel.hpp"

namespace rmedge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Rows of a CSV, every row prefixed by the run id.
class Csv {
public:
    Csv(std::string id, const std::vector<std::string>& header) : id_(std::move(id)) {
        s_ << "run_id";
        for (const auto& h : header) s_ << ',' << h;
        s_ << '\n';
    }
    template <class... Cells>
    void row(const Cells&... cells) {
        s_ << id_;
        ((s_ << ',' << cell(cells)), ...);
        s_ << '\n';
    }
    std::string str() const { return s_.str(); }

private:
    static std::string cell(double x) { return num(x); }
    static std::string cell(const std::string& x) { return x; }
    static std::string cell(const char* x) { return x; }
    template <class I>
        requires std::is_integral_v<I>
    static std::string cell(I x) { return std::to_string(x); }

    std::string id_;
    std::ostringstream s_;
};

Exec exec_of(const ExperimentConfig& c) { return c.serial ? Exec::serial : Exec::parallel; }

EdgeMethod method_of(const std::string& m) {
    if (m == "dense") return EdgeMethod::dense;
    if (m == "hessenberg") return EdgeMethod::hessenberg;
    if (m == "annulus") return EdgeMethod::annulus_dpp;
    return EdgeMethod::automatic;
}

json stream(const char* tag, std::uint64_t first, std::uint64_t count) {
    return json{{"tag", tag}, {"first_index", first}, {"count", count}};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

double distance_to_origin(const Box& b) {
    const double x = std::clamp(0.0, b.x_lo, b.x_hi);
    const double y = std::clamp(0.0, b.y_lo, b.y_hi);
    return std::hypot(x, y);
}

// Counts of eigenvalues in each box per sample. The annulus sampler is exact for boxes
// outside radius r0, otherwise the full spectrum is used.
std::vector<std::vector<std::size_t>> box_counts(const ExperimentConfig& c, Dist d, const std::vector<Box>& boxes) {
    double inner = 1e300;
    for (const auto& b : boxes) inner = std::min(inner, distance_to_origin(b));
    EdgeMethod m = method_of(c.method);
    const double r0 = default_annulus_radius(c.n);
    if (d == Dist::ginibre && (m == EdgeMethod::automatic || m == EdgeMethod::annulus_dpp))
        m = inner > r0 ? EdgeMethod::annulus_dpp : EdgeMethod::hessenberg;
    else if (m == EdgeMethod::automatic)
        m = EdgeMethod::dense;
    std::vector<std::vector<std::size_t>> counts(boxes.size(), std::vector<std::size_t>(c.samples));
    for_each_index(c.samples, exec_of(c), [&](std::size_t i) {
        const auto pts = edge_sample_points(d, c.n, c.seed, i, m, r0);
        for (std::size_t b = 0; b < boxes.size(); ++b) counts[b][i] = count_in_box(pts, boxes[b]);
    });
    return counts;
}

json box_summary(const Box& b, const std::vector<std::size_t>& counts, Dist d, int n) {
    std::vector<double> x(counts.begin(), counts.end());
    json j{{"box", {b.x_lo, b.x_hi, b.y_lo, b.y_hi}},
           {"mean", mean(x)},
           {"std_error", std_error(x)},
           {"variance", sample_variance(x)},
           {"fraction_nonempty",
            double(std::count_if(counts.begin(), counts.end(), [](std::size_t k) { return k > 0; })) / x.size()}};
    if (d == Dist::ginibre) j["expected_ginibre"] = expected_count(n, b).value;
    return j;
}

CommandResult cmd_sample(const ExperimentConfig& c, RunOutput& out) {
    const Dist d = parse_dist(c.dist);
    const std::size_t count = std::max<std::size_t>(c.samples, 1);
    std::vector<Spectrum> specs(count);
    for_each_index(count, exec_of(c), [&](std::size_t k) {
        const auto idx = c.index + k;
        specs[k] = c.method == "hessenberg" ? eigvals_hessenberg(sample_ginibre_hessenberg(c.n, c.seed, idx))
                                            : eigvals(sample_matrix(d, c.n, c.seed, idx));
    });
    Csv csv(out.id(), {"index", "re", "im"});
    json per = json::array();
    CommandResult r;
    for (std::size_t k = 0; k < count; ++k) {
        for (cplx v : specs[k].values) csv.row(c.index + k, v.real(), v.imag());
        const auto e = rightmost(specs[k], c.theta, c.n);
        per.push_back({{"index", c.index + k},
                       {"spectral_radius", spectral_radius(specs[k])},
                       {"max_re", e.max_re},
                       {"residual", specs[k].residual}});
        if (!std::isfinite(e.max_re)) r.numerical_failure = true;
    }
    out.write("eigenvalues.csv", csv.str());
    r.summary = {{"samples", per}};
    r.streams.push_back(stream("matrix", c.index, count));
    if (r.numerical_failure) r.failure = "non-finite eigenvalue";
    return r;
}

CommandResult cmd_edge_stats(const ExperimentConfig& c, RunOutput& out) {
    const Dist d = parse_dist(c.dist);
    EdgeOptions opt;
    opt.method = method_of(c.method);
    opt.theta = c.theta;
    opt.exec = exec_of(c);
    const auto samples = mc_edge_ensemble(d, c.n, c.samples, c.seed, opt);

    Csv csv(out.id(), {"index", "max_re", "argmax_re", "argmax_im", "rho", "gumbel_g", "fallback"});
    std::vector<double> m;
    std::size_t fallbacks = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        csv.row(i, s.max_re, s.argmax.real(), s.argmax.imag(), s.rho,
                s.gumbel_g ? num(*s.gumbel_g) : std::string(), int(s.fallback));
        m.push_back(s.max_re);
        fallbacks += s.fallback;
    }
    out.write("edge_samples.csv", csv.str());

    CommandResult r;
    const auto fit = gumbel_fit(m);
    r.summary = {{"samples", c.samples},
                 {"median", median(m)},
                 {"mean", mean(m)},
                 {"gumbel_fit",
                  {{"location", fit.location},
                   {"scale", fit.scale},
                   {"ks_distance", fit.ks_distance},
                   {"note", "parameters fitted on the same data; KS distance reported without p-value"}}},
                 {"fallbacks", fallbacks}};
    if (c.n >= 3) r.summary["gamma_n"] = gamma_n(c.n);

    std::vector<Box> boxes;
    std::vector<std::string> names;
    if (c.box.size() == 4) {
        boxes.push_back({c.box[0], c.box[1], c.box[2], c.box[3]});
        names.push_back("box");
    } else if (c.omega) {
        const auto om = omega_boxes(c.n, c.Cn, c.tau);
        boxes = {om.omega0, om.omega1, om.omega2};
        names = {"omega0", "omega1", "omega2"};
    }
    json bc = json::object();
    if (!boxes.empty()) {
        const auto counts = box_counts(c, d, boxes);
        for (std::size_t b = 0; b < boxes.size(); ++b) bc[names[b]] = box_summary(boxes[b], counts[b], d, c.n);
    }
    r.summary["box_counts"] = bc;
    r.streams.push_back(stream(d == Dist::ginibre && opt.method != EdgeMethod::dense ? "edge" : "matrix", 0, c.samples));
    return r;
}

CommandResult cmd_girko(const ExperimentConfig& c, RunOutput& out) {
    const Dist d = parse_dist(c.dist);
    const auto X = sample_matrix(d, c.n, c.seed, c.index);
    std::optional<CutoffOverride> geom;
    if (!c.gamma_geometry) geom = CutoffOverride{c.L, c.l, c.h};
    const auto f = build_cutoff(CutoffKind::lower, c.n, c.Cn, c.tau, geom);
    const double lhs = girko_lhs(eigvals(X), f);
    const auto s = girko_rhs(X, f, c.eta0, c.T, QuadratureGrid{c.grid_level}, exec_of(c));
    CommandResult r;
    const double gap = std::abs(lhs - s.total());
    r.summary = {{"lhs", lhs},
                 {"rhs_total", s.total()},
                 {"I_small", s.I_small},
                 {"I_large", s.I_large},
                 {"logdet", s.logdet_term},
                 {"gap", gap},
                 {"direct", s.direct},
                 {"eta0", s.eta0},
                 {"T", s.T},
                 {"nodes", s.nodes},
                 {"refined_panels", s.refined_panels},
                 {"cutoff", {{"L", f.L}, {"l", f.l}, {"h", f.h}}}};
    Csv csv(out.id(), {"quantity", "value"});
    for (const char* k : {"lhs", "rhs_total", "I_small", "I_large", "logdet", "gap"})
        csv.row(std::string(k), r.summary[k].get<double>());
    out.write("girko.csv", csv.str());
    r.streams.push_back(stream("matrix", c.index, 1));
    if (!std::isfinite(gap)) {
        r.numerical_failure = true;
        r.failure = "non-finite Girko gap";
    }
    return r;
}

CommandResult cmd_dyson(const ExperimentConfig& c, RunOutput& out) {
    const auto p = solve_m({c.z_re, c.z_im}, c.eta);
    CommandResult r;
    r.summary = {{"z", {c.z_re, c.z_im}},
                 {"eta", p.eta},
                 {"v", p.v},
                 {"u", p.u},
                 {"m", complex_json(p.mfrak)},
                 {"residual", self_consistency_residual(p)},
                 {"cubic_residual", cubic_residual(p)}};
    Csv csv(out.id(), {"z_re", "z_im", "eta", "v", "u", "m_re", "m_im"});
    csv.row(c.z_re, c.z_im, p.eta, p.v, p.u, p.mfrak.real(), p.mfrak.imag());
    out.write("dyson.csv", csv.str());
    if (!std::isfinite(p.v) || !(p.v > 0 || c.eta == 0)) {
        r.numerical_failure = true;
        r.failure = "no positive root";
    }
    return r;
}

CommandResult cmd_kernel(const ExperimentConfig& c, RunOutput& out) {
    const Box b{c.box[0], c.box[1], c.box[2], c.box[3]};
    const auto e = expected_count(c.n, b);
    CommandResult r;
    r.summary = {{"n", c.n}, {"box", c.box}, {"expected", e.value}, {"errors", {{"expected", e.error}}}};
    Csv csv(out.id(), {"quantity", "value", "error"});
    csv.row(std::string("expected"), e.value, e.error);
    if (c.n <= kVarianceCap) {
        VarianceOptions vo;
        vo.seed = c.seed;
        vo.exec = exec_of(c);
        const auto v = variance_count(c.n, b, vo);
        r.summary["variance"] = v.variance;
        r.summary["errors"]["variance"] = v.error;
        csv.row(std::string("variance"), v.variance, v.error);
        r.streams.push_back(stream("quadrature", 0, 1));
    } else {
        r.summary["variance"] = nullptr;
        r.summary["note"] = "variance needs n <= " + std::to_string(kVarianceCap);
    }
    out.write("kernel.csv", csv.str());
    return r;
}

CommandResult cmd_tail(const ExperimentConfig& c, RunOutput& out) {
    const TailParams p{c.n, c.delta};
    const auto rep = tail_mc(p, c.y_grid, c.samples, c.seed, exec_of(c), true);
    Csv csv(out.id(), {"y", "mc_p", "ci_lo", "ci_hi", "bound", "kernel_integral", "hits", "in_regime"});
    json rows = json::array();
    for (const auto& row : rep.rows) {
        csv.row(row.y, row.mc_p, row.ci.lo, row.ci.hi, row.bound, row.kernel_integral, row.hits,
                int(row.in_regime));
        rows.push_back({{"y", row.y}, {"mc_p", row.mc_p}, {"bound", row.bound},
                        {"kernel_integral", row.kernel_integral}});
    }
    out.write("tail.csv", csv.str());
    CommandResult r;
    r.summary = {{"n", c.n}, {"delta", c.delta}, {"n_delta2", p.n_delta2()}, {"samples", c.samples}, {"rows", rows}};
    r.streams.push_back(stream("matrix", 0, c.samples));
    return r;
}

CommandResult cmd_flow(const ExperimentConfig& c, RunOutput& out) {
    FlowOptions o;
    o.dist = parse_dist(c.dist);
    o.n = c.n;
    o.pairs = c.pairs;
    o.seed = c.seed;
    o.z = {c.z_re, c.z_im};
    o.eta = c.eta;
    o.t_grid = c.t_grid;
    o.exec = exec_of(c);
    const auto rep = flow_experiment(o);
    Csv csv(out.id(), {"pair", "t", "im_avg_trace_G"});
    for (std::size_t k = 0; k < rep.paths.size(); ++k)
        for (std::size_t j = 0; j < c.t_grid.size(); ++j) csv.row(k, c.t_grid[j], rep.paths[k][j]);
    out.write("flow_trajectories.csv", csv.str());
    double worst = 0;
    for (double dr : rep.drift) worst = std::max(worst, std::abs(dr) / rep.scale);
    CommandResult r;
    r.summary = {{"eta", rep.eta},
                 {"t_grid", c.t_grid},
                 {"mean", rep.mean},
                 {"std_err", rep.std_err},
                 {"drift", rep.drift},
                 {"drift_err", rep.drift_err},
                 {"scale", rep.scale},
                 {"max_drift_over_scale", worst},
                 {"verdict", worst <= 20 ? "within-20x-scale" : "exceeds-20x-scale"}};
    r.streams.push_back(stream("matrix", 0, c.pairs));
    r.streams.push_back(stream("ginibre_partner", 0, c.pairs));
    return r;
}

CommandResult cmd_stability(const ExperimentConfig& c, RunOutput& out) {
    const Dist d = parse_dist(c.dist);
    EdgeOptions opt;
    opt.method = method_of(c.method);
    opt.exec = exec_of(c);
    const auto samples = mc_edge_ensemble(d, c.n, c.samples, c.seed, opt);
    std::vector<double> m;
    Csv csv(out.id(), {"index", "max_re", "growth_rate", "prediction"});
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double rate = growth_rate(c.g, samples[i].max_re);
        csv.row(i, samples[i].max_re, rate, std::string(rate < 0 ? "decay" : "blowup"));
        m.push_back(samples[i].max_re);
    }
    out.write("stability.csv", csv.str());
    const auto rep = classify_stability(c.g, c.n, m, c.Cn);
    CommandResult r;
    r.summary = {{"g", rep.g},
                 {"n", rep.n},
                 {"samples", rep.samples},
                 {"decay_fraction", rep.decay_fraction},
                 {"blowup_fraction", rep.blowup_fraction},
                 {"band", {rep.band_lo, rep.band_hi}},
                 {"band_source", rep.band_from_gamma ? "gamma_n" : "empirical-quantiles"},
                 {"verdict", to_string(rep.verdict)}};
    r.streams.push_back(stream(d == Dist::ginibre && opt.method != EdgeMethod::dense ? "edge" : "matrix", 0, c.samples));
    return r;
}

CommandResult cmd_selfcheck(const ExperimentConfig& c, RunOutput& out) {
    Csv csv(out.id(), {"check", "value", "reference", "pass"});
    json checks = json::array();
    bool ok = true;
    auto add = [&](const std::string& name, double value, double ref, bool pass) {
        csv.row(name, value, ref, int(pass));
        checks.push_back({{"check", name}, {"value", value}, {"reference", ref}, {"pass", pass}});
        ok = ok && pass;
    };
    for (Dist d : all_dists()) {
        const auto rep = moments_selfcheck(d, 100000, c.seed);
        add("moments." + to_string(d), double(rep.rows.size()), 0, rep.pass);
    }
    const auto plane = expected_count_plane(10);
    add("kernel.normalization.n10", plane.value, 10, std::abs(plane.value - 10) < 1e-8);
    for (double eta : {1e-6, 1e-2, 1.0}) {
        const auto p = solve_m({0.7, 0.4}, eta);
        add("dyson.residual.eta" + num(eta), self_consistency_residual(p), 0, self_consistency_residual(p) < 1e-12);
    }
    for (double x : {0.5, 5.0, 20.0}) {
        const double s = bessel_I0_series(x).real(), i = bessel_I0_integral(x).real();
        add("bessel.I0.x" + num(x), s, i, std::abs(s - i) <= 1e-10 * std::exp(x));
    }
    const cplx kb = kernel_KB(1.3, 0.4), kbn = kernel_KB(-1.3, 0.4);
    add("bessel.KB.parity", kb.real(), kbn.real(), kb == kbn);
    out.write("selfcheck.csv", csv.str());
    CommandResult r;
    r.summary = {{"checks", checks}, {"pass", ok}};
    r.streams.push_back(stream("moments", 0, 1));
    if (!ok) {
        r.numerical_failure = true;
        r.failure = "selfcheck failed";
    }
    return r;
}

}  // namespace

RunOutput::RunOutput(fs::path dir, std::string run_id) : dir_(std::move(dir)), id_(std::move(run_id)) {
    fs::create_directories(dir_);
}

void RunOutput::write(const std::string& name, const std::string& content) {
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp");
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write " + tmp.string());
        f << content;
        if (!f.flush()) throw ConfigError("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
    files_.push_back({{"file", name}, {"fnv1a", hex64(fnv1a(content))}, {"bytes", content.size()}});
}

void RunOutput::finish(const json& manifest_fields) {
    json m = manifest_fields;
    m["run_id"] = id_;
    m["outputs"] = files_;
    write("manifest.json", m.dump(2) + "\n");
}

CommandResult run_command(const ExperimentConfig& c, RunOutput& out) {
    const std::string& s = c.subcommand;
    if (s == "sample") return cmd_sample(c, out);
    if (s == "edge-stats") return cmd_edge_stats(c, out);
    if (s == "girko-check") return cmd_girko(c, out);
    if (s == "dyson") return cmd_dyson(c, out);
    if (s == "kernel") return cmd_kernel(c, out);
    if (s == "tail") return cmd_tail(c, out);
    if (s == "flow") return cmd_flow(c, out);
    if (s == "stability") return cmd_stability(c, out);
    if (s == "selfcheck") return cmd_selfcheck(c, out);
    throw ConfigError("unknown subcommand: " + s);
}

}  // namespace rmedge::cli
