#include "config.hpp"

#include <cmath>
#include <set>

#include "rmedge/edge_stats.hpp"
#include "rmedge/ensembles.hpp"
#include "rmedge/ginibre_kernel.hpp"
#include "rmedge/girko.hpp"

namespace rmedge::cli {

using nlohmann::json;

void to_json(json& j, const ExperimentConfig& c) {
    j = json{{"subcommand", c.subcommand}, {"dist", c.dist}, {"n", c.n}, {"samples", c.samples},
             {"seed", c.seed}, {"index", c.index}, {"method", c.method}, {"theta", c.theta},
             {"z_re", c.z_re}, {"z_im", c.z_im}, {"eta", c.eta}, {"delta", c.delta},
             {"box", c.box}, {"omega", c.omega}, {"Cn", c.Cn}, {"tau", c.tau},
             {"grid_level", c.grid_level}, {"T", c.T}, {"eta0", c.eta0}, {"L", c.L}, {"l", c.l},
             {"h", c.h}, {"gamma_geometry", c.gamma_geometry}, {"y_grid", c.y_grid},
             {"t_grid", c.t_grid}, {"pairs", c.pairs}, {"g", c.g}, {"out", c.out},
             {"workers", c.workers}, {"serial", c.serial}};
}

void from_json(const json& j, ExperimentConfig& c, std::vector<std::string>& unknown) {
    const json& src = j.contains("config") && j["config"].is_object() ? j["config"] : j;
    json known;
    to_json(known, c);
    for (auto it = src.begin(); it != src.end(); ++it)
        if (!known.contains(it.key())) unknown.push_back("unknown config key: " + it.key());
    auto get = [&](const char* key, auto& field) {
        if (src.contains(key)) src.at(key).get_to(field);
    };
    get("subcommand", c.subcommand);
    get("dist", c.dist);
    get("n", c.n);
    get("samples", c.samples);
    get("seed", c.seed);
    get("index", c.index);
    get("method", c.method);
    get("theta", c.theta);
    get("z_re", c.z_re);
    get("z_im", c.z_im);
    get("eta", c.eta);
    get("delta", c.delta);
    get("box", c.box);
    get("omega", c.omega);
    get("Cn", c.Cn);
    get("tau", c.tau);
    get("grid_level", c.grid_level);
    get("T", c.T);
    get("eta0", c.eta0);
    get("L", c.L);
    get("l", c.l);
    get("h", c.h);
    get("gamma_geometry", c.gamma_geometry);
    get("y_grid", c.y_grid);
    get("t_grid", c.t_grid);
    get("pairs", c.pairs);
    get("g", c.g);
    get("out", c.out);
    get("workers", c.workers);
    get("serial", c.serial);
}

void resolve_defaults(ExperimentConfig& c) {
    const std::string& s = c.subcommand;
    if (c.n == 0) {
        if (s == "girko-check") c.n = 32;
        if (s == "flow") c.n = 64;
        if (s == "tail") c.n = 100;
    }
    if (s == "girko-check" && c.eta0 <= 0 && c.n > 0) c.eta0 = default_eta0(c.n, c.tau);
    if (c.eta <= 0 && c.n > 0 && s == "flow") c.eta = std::pow(double(c.n), -0.75);
    if (c.eta <= 0 && s == "dyson") c.eta = 1e-3;
}

std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> v;
    static const std::set<std::string> subs{"sample", "edge-stats", "girko-check", "dyson", "kernel",
                                            "tail",   "flow",       "stability",   "selfcheck"};
    const std::string& s = c.subcommand;
    if (!subs.count(s)) v.push_back("unknown subcommand: " + s);
    try {
        parse_dist(c.dist);
    } catch (const std::exception&) {
        v.push_back("unknown dist: " + c.dist);
    }
    static const std::set<std::string> methods{"auto", "dense", "hessenberg", "annulus"};
    if (!methods.count(c.method)) v.push_back("unknown method: " + c.method);
    if (c.method != "auto" && c.method != "dense" && c.dist != "ginibre")
        v.push_back("method " + c.method + " needs dist=ginibre");

    const bool needs_n = s != "dyson" && s != "selfcheck";
    if (needs_n && c.n < 1) v.push_back("n must be >= 1");
    if (c.workers < 0) v.push_back("workers must be >= 0");
    if (!std::isfinite(c.theta)) v.push_back("theta must be finite");

    const bool fit = s == "edge-stats" || s == "stability" || s == "tail";
    if (fit && c.samples == 0) v.push_back("samples must be >= 1");
    if (s == "edge-stats" && c.samples > 0 && c.samples < 100)
        v.push_back("edge-stats needs samples >= 100 for the Gumbel fit");

    const bool has_box = !c.box.empty();
    if (has_box) {
        if (c.box.size() != 4)
            v.push_back("box needs 4 values x_lo x_hi y_lo y_hi");
        else if (!(c.box[0] < c.box[1] && c.box[2] < c.box[3]))
            v.push_back("box must satisfy x_lo < x_hi and y_lo < y_hi");
    }
    if (s == "kernel" && !has_box) v.push_back("kernel needs --box");
    const bool wants_gamma = (s == "edge-stats" && c.omega) || (s == "girko-check" && c.gamma_geometry);
    if (wants_gamma && c.n >= 3 && gamma_n(c.n) <= 0 && !has_box)
        v.push_back("gamma_n <= 0 at n=" + std::to_string(c.n) + " and no box override");
    if (wants_gamma && c.n > 0 && c.n < 3) v.push_back("gamma_n needs n >= 3");

    if (s == "girko-check") {
        if (!(c.eta0 > 0)) v.push_back("eta0 must be > 0");
        if (!(c.eta0 < c.T)) v.push_back("eta0 must be < T");
        if (c.grid_level < 0 || c.grid_level > 6) v.push_back("grid_level must be in [0, 6]");
        if (!(c.l > 0 && c.h > 0)) v.push_back("l and h must be > 0");
    }
    if (s == "dyson") {
        if (!(c.eta >= 0)) v.push_back("eta must be >= 0");
        if (c.eta == 0 && std::abs(std::hypot(c.z_re, c.z_im) - 1) < 1e-15)
            v.push_back("eta = 0 is singular at |z| = 1");
    }
    if (s == "tail") {
        if (!(c.delta > 0)) v.push_back("delta must be > 0");
        if (c.y_grid.empty()) v.push_back("y_grid must be non-empty");
        for (double y : c.y_grid)
            if (!(y > 0)) v.push_back("y_grid values must be > 0");
    }
    if (s == "flow") {
        if (c.pairs < 2) v.push_back("pairs must be >= 2");
        if (c.t_grid.size() < 2) v.push_back("t_grid needs at least two times");
        for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
            if (c.t_grid[i] < 0) v.push_back("t_grid values must be >= 0");
            if (i > 0 && !(c.t_grid[i] > c.t_grid[i - 1])) v.push_back("t_grid must be increasing");
        }
    }
    if (s == "stability" && !(c.g >= 0)) v.push_back("g must be >= 0");
    return v;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string run_id(const ExperimentConfig& c) {
    json j;
    to_json(j, c);
    j.erase("out");
    j.erase("workers");
    j.erase("serial");
    return hex64(fnv1a(j.dump()));
}

}  // namespace rmedge::cli
