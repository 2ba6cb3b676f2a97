#pragma once

#include <utility>
#include <vector>

namespace wulff {

/// Gauss-Legendre rule on [-1, 1]; nodes ascending, deterministic.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule of order n (n >= 1), computed once and cached.
const GaussRule& gauss_legendre(int n);

/// Rule mapped to [a, b].
GaussRule gauss_legendre_on(int n, double a, double b);

}  // namespace wulff
