#pragma once

#include <cstddef>
#include <vector>

namespace outflow {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t count = 0;
};

// Ordinary least squares y = intercept + slope x. A perfectly flat y gives r2 = 1.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Composite trapezoid weights for n uniformly spaced nodes with spacing h.
std::vector<double> trapezoid_weights(std::size_t n, double h);

// Finite-difference weights for the m-th derivative at x0 from samples at xs (Fornberg).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

}  // namespace outflow
