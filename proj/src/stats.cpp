#include "rmedge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rmedge/types.hpp"

namespace rmedge {

double mean(const std::vector<double>& x) {
    if (x.empty()) throw ConfigError("mean of empty sample");
    double s = 0;
    for (double v : x) s += v;
    return s / x.size();
}

double sample_variance(const std::vector<double>& x) {
    if (x.size() < 2) throw ConfigError("variance needs >= 2 values");
    const double m = mean(x);
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return s / (x.size() - 1);
}

double std_error(const std::vector<double>& x) { return std::sqrt(sample_variance(x) / x.size()); }

double variance_std_error(const std::vector<double>& x) {
    const double N = static_cast<double>(x.size());
    const double m = mean(x);
    double m2 = 0, m4 = 0;
    for (double v : x) {
        const double d = (v - m) * (v - m);
        m2 += d;
        m4 += d * d;
    }
    m2 /= N;
    m4 /= N;
    const double s2 = m2 * N / (N - 1);
    return std::sqrt(std::max(0.0, (m4 - s2 * s2 * (N - 3) / (N - 1)) / N));
}

double quantile(std::vector<double> x, double q) {
    if (x.empty()) throw ConfigError("quantile of empty sample");
    std::sort(x.begin(), x.end());
    const double pos = q * (x.size() - 1);
    const std::size_t i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= x.size()) return x.back();
    const double f = pos - i;
    return x[i] * (1 - f) + x[i + 1] * f;
}

double median(std::vector<double> x) { return quantile(std::move(x), 0.5); }

double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
    if (x.empty()) throw ConfigError("KS of empty sample");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(x[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ConfigError("KS of empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

}  // namespace rmedge
