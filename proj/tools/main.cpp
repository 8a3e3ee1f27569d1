#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "json.hpp"
#include "rmedge/parallel.hpp"
#include "rmedge/types.hpp"

using nlohmann::json;
using namespace rmedge::cli;

namespace {

int fail(int code, const std::string& kind, const json& detail) {
    json e{{"error", kind}, {"exit_code", code}};
    e.update(detail);
    std::cerr << e.dump() << std::endl;
    return code;
}

std::string config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    ExperimentConfig cfg;
    std::vector<std::string> violations;
    const std::string cfg_file = config_path(argc, argv);
    if (!cfg_file.empty()) {
        std::ifstream in(cfg_file);
        if (!in) return fail(2, "config_error", {{"violations", {"cannot read config file " + cfg_file}}});
        try {
            from_json(json::parse(in), cfg, violations);
        } catch (const std::exception& e) {
            return fail(2, "config_error", {{"violations", {std::string("bad config file: ") + e.what()}}});
        }
    }
    const bool strict = cfg_file.empty();

    CLI::App app{"Experiments on the rightmost eigenvalue of iid random matrices"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);
    std::string ignored;
    app.add_option("--config", ignored, "JSON config (or a manifest.json); flags override it");
    app.add_option("--out", cfg.out, "output directory");
    int workers_flag = 0;
    app.add_option("--workers", workers_flag, "worker threads (overrides RMEDGE_WORKERS)")->check(CLI::NonNegativeNumber);
    app.add_flag("--serial", cfg.serial, "use the serial reference path");

    auto n_opt = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--n", cfg.n, "matrix size");
        if (required && strict) o->required();
    };
    auto dist_opt = [&](CLI::App* s) {
        s->add_option("--dist", cfg.dist, "ginibre | bernoulli_phase | uniform_circle | two_point_complex");
    };
    auto seed_opt = [&](CLI::App* s) { s->add_option("--seed", cfg.seed, "master seed"); };
    auto samples_opt = [&](CLI::App* s, bool required) {
        auto* o = s->add_option("--samples", cfg.samples, "Monte Carlo samples");
        if (required && strict) o->required();
    };
    auto method_opt = [&](CLI::App* s) {
        s->add_option("--method", cfg.method, "auto | dense | hessenberg | annulus");
    };

    auto* sample = app.add_subcommand("sample", "eigenvalues of individual matrices");
    n_opt(sample, true);
    dist_opt(sample);
    seed_opt(sample);
    samples_opt(sample, false);
    method_opt(sample);
    sample->add_option("--index", cfg.index, "first sample index");
    sample->add_option("--theta", cfg.theta, "rotation angle for the rightmost eigenvalue");

    auto* edge = app.add_subcommand("edge-stats", "rightmost eigenvalue statistics");
    n_opt(edge, true);
    dist_opt(edge);
    seed_opt(edge);
    samples_opt(edge, true);
    method_opt(edge);
    edge->add_option("--theta", cfg.theta, "rotation angle");
    edge->add_option("--box", cfg.box, "x_lo x_hi y_lo y_hi")->expected(4);
    edge->add_flag("--omega", cfg.omega, "count in the Omega boxes (needs gamma_n > 0)");
    edge->add_option("--Cn", cfg.Cn, "box constant");
    edge->add_option("--tau", cfg.tau, "box exponent");

    auto* girko = app.add_subcommand("girko-check", "pathwise check of the Hermitization identity");
    girko->set_help_flag("--help", "print this help message and exit");  // frees --h
    n_opt(girko, false);
    dist_opt(girko);
    seed_opt(girko);
    girko->add_option("--index", cfg.index, "sample index");
    girko->add_option("--L", cfg.L, "cutoff centre");
    girko->add_option("--l", cfg.l, "cutoff half-width in x");
    girko->add_option("--h", cfg.h, "cutoff half-height in y");
    girko->add_option("--grid-level", cfg.grid_level, "quadrature refinement level");
    girko->add_option("--eta0", cfg.eta0, "eta split point (default n^{-7/8-tau})");
    girko->add_option("--T", cfg.T, "upper eta cut");
    girko->add_option("--tau", cfg.tau, "exponent");
    girko->add_option("--Cn", cfg.Cn, "box constant");
    girko->add_flag("--gamma-geometry", cfg.gamma_geometry, "cutoff geometry from gamma_n instead of L, l, h");

    auto* dyson = app.add_subcommand("dyson", "solve the scalar Dyson equation");
    dyson->add_option("--z-re", cfg.z_re, "Re z");
    dyson->add_option("--z-im", cfg.z_im, "Im z");
    dyson->add_option("--eta", cfg.eta, "spectral parameter");

    auto* kernel = app.add_subcommand("kernel", "Ginibre kernel count statistics for a box");
    n_opt(kernel, true);
    seed_opt(kernel);
    kernel->add_option("--box", cfg.box, "x_lo x_hi y_lo y_hi")->expected(4);

    auto* tail = app.add_subcommand("tail", "lower tail of the smallest singular value");
    n_opt(tail, false);
    seed_opt(tail);
    samples_opt(tail, true);
    tail->add_option("--delta", cfg.delta, "|z|^2 - 1");
    tail->add_option("--y-grid", cfg.y_grid, "y values")->expected(1, 1000);

    auto* flow = app.add_subcommand("flow", "interpolation flow drift");
    n_opt(flow, false);
    dist_opt(flow);
    seed_opt(flow);
    flow->add_option("--pairs", cfg.pairs, "coupled pairs");
    flow->add_option("--z-re", cfg.z_re, "Re z");
    flow->add_option("--z-im", cfg.z_im, "Im z");
    flow->add_option("--eta", cfg.eta, "spectral parameter (default n^{-3/4})");
    flow->add_option("--t-grid", cfg.t_grid, "flow times")->expected(2, 1000);

    auto* stab = app.add_subcommand("stability", "stability of u' = (-I + gX) u");
    n_opt(stab, true);
    dist_opt(stab);
    seed_opt(stab);
    samples_opt(stab, true);
    method_opt(stab);
    stab->add_option("--g", cfg.g, "coupling")->required(strict);
    stab->add_option("--Cn", cfg.Cn, "band constant");

    auto* self = app.add_subcommand("selfcheck", "quick consistency checks");
    seed_opt(self);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "usage_error", {{"message", e.what()}});
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    if (const char* env = std::getenv("RMEDGE_WORKERS")) {
        try {
            cfg.workers = std::stoi(env);
        } catch (const std::exception&) {
            violations.push_back(std::string("RMEDGE_WORKERS is not an integer: ") + env);
        }
    }
    if (workers_flag > 0) cfg.workers = workers_flag;

    resolve_defaults(cfg);
    for (auto& v : validate(cfg)) violations.push_back(std::move(v));
    if (!violations.empty()) return fail(2, "config_error", {{"violations", violations}});
    rmedge::set_worker_count(cfg.workers);

    const auto start = std::chrono::steady_clock::now();
    try {
        RunOutput out(cfg.out, run_id(cfg));
        auto res = run_command(cfg, out);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        res.summary["run_id"] = out.id();
        out.write("summary.json", res.summary.dump(2) + "\n");
        json cj;
        to_json(cj, cfg);
        out.finish({{"version", kVersion},
                    {"subcommand", cfg.subcommand},
                    {"config", cj},
                    {"seed", cfg.seed},
                    {"streams", res.streams},
                    {"workers", rmedge::worker_count()},
                    {"wall_time_s", wall}});
        std::cout << res.summary.dump(2) << std::endl;
        if (res.numerical_failure) return fail(3, "numerical_failure", {{"message", res.failure}});
        return 0;
    } catch (const rmedge::ConfigError& e) {
        return fail(2, "config_error", {{"violations", {e.what()}}});
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(2, "config_error", {{"violations", {e.what()}}});
    } catch (const rmedge::NumericalError& e) {
        return fail(3, "numerical_failure", {{"message", e.what()}});
    } catch (const std::exception& e) {
        return fail(3, "numerical_failure", {{"message", e.what()}});
    }
}
