#pragma once

#include <vector>

namespace rmedge {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// m-point Gauss-Legendre rule on [-1, 1]; cached per m.
const Rule& gauss_legendre(int m);

// Composite rule: `panels` equal panels on [a, b], m nodes each.
Rule composite(double a, double b, int panels, int m);

// Appends a composite rule to `out`.
void append_composite(Rule& out, double a, double b, int panels, int m);

}  // namespace rmedge
