#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rmedge {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

enum class Exec { serial, parallel };

// Maps to exit code 2 in the CLI.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Maps to exit code 3 in the CLI.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Box {
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;

    bool contains(cplx z) const {
        return z.real() >= x_lo && z.real() < x_hi && z.imag() >= y_lo && z.imag() < y_hi;
    }
    double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
    bool valid() const { return x_lo < x_hi && y_lo < y_hi; }
};

struct Estimate {
    double value = 0;
    double error = 0;
};

}  // namespace rmedge
