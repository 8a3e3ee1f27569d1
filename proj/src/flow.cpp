#include "rmedge/flow.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "rmedge/edge_stats.hpp"
#include "rmedge/lapack.hpp"
#include "rmedge/parallel.hpp"
#include "rmedge/rng.hpp"
#include "rmedge/spectral.hpp"
#include "rmedge/stats.hpp"

namespace rmedge {

ComplexMatrix interpolate(const ComplexMatrix& X0, const ComplexMatrix& Ggin, double t) {
    if (!(t >= 0)) throw ConfigError("flow time must be >= 0");
    if (X0.rows() != Ggin.rows() || X0.cols() != Ggin.cols()) throw ConfigError("flow: shape mismatch");
    if (t == 0) return X0;
    return std::exp(-0.5 * t) * X0 + std::sqrt(-std::expm1(-t)) * Ggin;
}

ComplexMatrix sample_ginibre_partner(int n, std::uint64_t seed, std::uint64_t index) {
    if (n < 1) throw ConfigError("n must be >= 1");
    Engine g = make_engine(seed, index, Stream::ginibre_partner);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    ComplexMatrix G(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) G(i, j) = s * complex_normal(g);
    return G;
}

std::vector<double> observable_trajectory(const ComplexMatrix& X0, const ComplexMatrix& Ggin,
                                          const std::vector<double>& t_grid, cplx z, double eta) {
    if (!(eta > 0)) throw ConfigError("eta must be > 0");
    const double n = static_cast<double>(X0.rows());
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) out.push_back(im_trace_resolvent(shifted_singulars(interpolate(X0, Ggin, t), z), eta) / (2 * n));
    return out;
}

double drift_scale(int n, double eta) {
    const double psi = 1.0 / (n * eta);
    return psi * psi / std::sqrt(static_cast<double>(n)) + std::pow(psi, 5) + 1.0 / n;
}

FlowReport flow_experiment(const FlowOptions& opt) {
    if (opt.n < 2) throw ConfigError("flow: n must be >= 2");
    if (opt.pairs < 2) throw ConfigError("flow: pairs must be >= 2");
    if (opt.t_grid.empty()) throw ConfigError("flow: empty t grid");
    for (std::size_t k = 0; k < opt.t_grid.size(); ++k) {
        if (!(opt.t_grid[k] >= 0)) throw ConfigError("flow: t must be >= 0");
        if (k > 0 && !(opt.t_grid[k] > opt.t_grid[k - 1])) throw ConfigError("flow: t grid must increase");
    }
    FlowReport r;
    r.options = opt;
    r.eta = opt.eta > 0 ? opt.eta : std::pow(static_cast<double>(opt.n), -0.75);
    r.scale = drift_scale(opt.n, r.eta);
    r.paths.assign(opt.pairs, {});
    for_each_index(opt.pairs, opt.exec, [&](std::size_t i) {
        r.paths[i] = observable_trajectory(sample_matrix(opt.dist, opt.n, opt.seed, i),
                                           sample_ginibre_partner(opt.n, opt.seed, i), opt.t_grid, opt.z, r.eta);
    });
    const std::size_t K = opt.t_grid.size();
    std::vector<double> col(opt.pairs);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < opt.pairs; ++i) col[i] = r.paths[i][k];
        r.mean.push_back(tree_sum(col) / opt.pairs);
        r.std_err.push_back(std_error(col));
    }
    for (std::size_t k = 0; k + 1 < K; ++k) {
        const double dt = opt.t_grid[k + 1] - opt.t_grid[k];
        for (std::size_t i = 0; i < opt.pairs; ++i) col[i] = (r.paths[i][k + 1] - r.paths[i][k]) / dt;
        r.drift.push_back(tree_sum(col) / opt.pairs);
        r.drift_err.push_back(std_error(col));
    }
    return r;
}

double growth_rate(double g, double max_re) { return -1.0 + g * max_re; }

std::string to_string(Stability s) {
    switch (s) {
        case Stability::decay: return "decay";
        case Stability::blowup: return "blowup";
        default: return "critical-band";
    }
}

StabilityReport classify_stability(double g, int n, const std::vector<double>& max_re, double Cn, double q) {
    if (max_re.empty()) throw ConfigError("classify_stability: no samples");
    if (!(g >= 0)) throw ConfigError("classify_stability: g must be >= 0");
    if (!(q > 0 && q < 0.5)) throw ConfigError("classify_stability: quantile must lie in (0, 1/2)");
    StabilityReport r;
    r.g = g;
    r.n = n;
    r.samples = max_re.size();
    std::size_t decay = 0;
    std::vector<double> inv;
    inv.reserve(max_re.size());
    for (double m : max_re) {
        decay += (g * m < 1.0) ? 1 : 0;
        inv.push_back(1.0 / m);
    }
    r.decay_fraction = double(decay) / max_re.size();
    r.blowup_fraction = 1.0 - r.decay_fraction;
    const double gam = n >= 3 ? gamma_n(n) : -1.0;
    if (gam > 0) {
        r.band_from_gamma = true;
        const double shift = std::sqrt(gam / (4.0 * n));
        const double half = Cn / std::sqrt(4.0 * n * gam);
        r.band_lo = 1.0 - shift - half;
        r.band_hi = 1.0 - shift + half;
    } else {
        r.band_lo = quantile(inv, q);
        r.band_hi = quantile(inv, 1.0 - q);
    }
    r.verdict = g < r.band_lo ? Stability::decay : (g > r.band_hi ? Stability::blowup : Stability::critical_band);
    return r;
}

double sup_norm(const std::vector<cplx>& u) {
    double m = 0;
    for (const auto& x : u) m = std::max(m, std::abs(x));
    return m;
}

std::vector<cplx> propagate(const ComplexMatrix& X, double g, const std::vector<cplx>& u0, double t_end, double rtol,
                            std::vector<std::pair<double, double>>* log_sup) {
    namespace ode = boost::numeric::odeint;
    const Eigen::Index n = X.rows();
    if (X.cols() != n || static_cast<Eigen::Index>(u0.size()) != n) throw ConfigError("propagate: shape mismatch");
    if (!(t_end >= 0)) throw ConfigError("propagate: t_end must be >= 0");
    if (!(rtol > 0)) throw ConfigError("propagate: rtol must be > 0");
    const ComplexMatrix A = g * X - ComplexMatrix::Identity(n, n);

    using State = std::vector<double>;  // interleaved re/im
    State x(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[2 * i] = u0[i].real();
        x[2 * i + 1] = u0[i].imag();
    }
    auto rhs = [&](const State& s, State& ds, double) {
        Eigen::Map<const Eigen::VectorXcd> u(reinterpret_cast<const cplx*>(s.data()), n);
        Eigen::Map<Eigen::VectorXcd> du(reinterpret_cast<cplx*>(ds.data()), n);
        du.noalias() = A * u;
    };
    auto observe = [&](const State& s, double t) {
        if (!log_sup) return;
        double m = 0;
        for (Eigen::Index i = 0; i < n; ++i) m = std::max(m, std::hypot(s[2 * i], s[2 * i + 1]));
        log_sup->emplace_back(t, std::log(m));
    };
    if (t_end > 0) {
        auto stepper = ode::make_controlled(1e-300, rtol, ode::runge_kutta_dopri5<State>());
        ode::integrate_adaptive(stepper, rhs, x, 0.0, t_end, std::min(0.01, t_end), observe);
    } else {
        observe(x, 0.0);
    }
    std::vector<cplx> u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = {x[2 * i], x[2 * i + 1]};
    return u;
}

std::vector<cplx> propagate_eig(const ComplexMatrix& X, double g, const std::vector<cplx>& u0, double t_end) {
    const Eigen::Index n = X.rows();
    if (X.cols() != n || static_cast<Eigen::Index>(u0.size()) != n) throw ConfigError("propagate: shape mismatch");
    ComplexMatrix V;
    const std::vector<cplx> lam = lapack::eigenvalues(X, V);
    Eigen::VectorXcd c = V.partialPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(u0.data(), n));
    for (Eigen::Index i = 0; i < n; ++i) c[i] *= std::exp((g * lam[i] - 1.0) * t_end);
    const Eigen::VectorXcd u = V * c;
    return {u.data(), u.data() + n};
}

}  // namespace rmedge
