#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmedge/ensembles.hpp"
#include "rmedge/types.hpp"

namespace rmedge {

// e^{-t/2} X0 + sqrt(1 - e^{-t}) Ggin
ComplexMatrix interpolate(const ComplexMatrix& X0, const ComplexMatrix& Ggin, double t);

// Ginibre matrix independent of sample_matrix(d, n, seed, index) for every d.
ComplexMatrix sample_ginibre_partner(int n, std::uint64_t seed, std::uint64_t index);

// Im <G_t^z(i eta)> along t_grid for the coupled path.
std::vector<double> observable_trajectory(const ComplexMatrix& X0, const ComplexMatrix& Ggin,
                                          const std::vector<double>& t_grid, cplx z, double eta);

// n^{-1/2} Psi^2 + Psi^5 + 1/n with Psi = 1/(n eta)
double drift_scale(int n, double eta);

struct FlowOptions {
    Dist dist = Dist::bernoulli_phase;
    int n = 64;
    std::size_t pairs = 100;
    std::uint64_t seed = 1;
    cplx z{1.0, 0.0};
    double eta = 0;  // <= 0 means n^{-3/4}
    std::vector<double> t_grid{0.0, 1.0};
    Exec exec = Exec::parallel;
};

struct FlowReport {
    FlowOptions options;
    double eta = 0;
    std::vector<double> mean;      // E Im<G> at each t
    std::vector<double> std_err;
    std::vector<double> drift;     // (E_{t_{k+1}} - E_{t_k}) / dt with common random numbers
    std::vector<double> drift_err;
    double scale = 0;              // drift_scale(n, eta)
    std::vector<std::vector<double>> paths;  // per pair, per t
};

FlowReport flow_experiment(const FlowOptions& opt);

// -1 + g max_re: the largest real part of the spectrum of -I + gX for g >= 0.
double growth_rate(double g, double max_re);

enum class Stability { decay, blowup, critical_band };
std::string to_string(Stability s);

struct StabilityReport {
    double g = 0;
    int n = 0;
    std::size_t samples = 0;
    double decay_fraction = 0;   // fraction with g max_re < 1
    double blowup_fraction = 0;
    double band_lo = 0, band_hi = 0;
    bool band_from_gamma = false;  // else empirical quantiles of 1/max_re
    Stability verdict = Stability::critical_band;
};

// Band edges 1 - sqrt(g_n/4n) -+ C_n/sqrt(4n g_n) when gamma_n > 0, else the
// (q, 1-q) empirical quantiles of 1/max_re.
StabilityReport classify_stability(double g, int n, const std::vector<double>& max_re, double Cn = 3.0,
                                   double q = 0.01);

// u(t_end) for u' = (-I + gX) u by adaptive Dormand-Prince with relative tolerance rtol.
// If log_sup is given it receives log ||u(t)||_inf at each accepted step (t, value).
std::vector<cplx> propagate(const ComplexMatrix& X, double g, const std::vector<cplx>& u0, double t_end,
                            double rtol = 1e-8,
                            std::vector<std::pair<double, double>>* log_sup = nullptr);

// V exp((-1 + g Lambda) t) V^{-1} u0
std::vector<cplx> propagate_eig(const ComplexMatrix& X, double g, const std::vector<cplx>& u0, double t_end);

double sup_norm(const std::vector<cplx>& u);

}  // namespace rmedge
