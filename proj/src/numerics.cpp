#include "outflow/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace outflow {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit needs at least two pairs");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw std::invalid_argument("linear_fit needs distinct abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.count = x.size();
    if (syy == 0) {
        f.r2 = 1.0;
    } else {
        double ssr = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (f.intercept + f.slope * x[i]);
            ssr += r * r;
        }
        f.r2 = 1.0 - ssr / syy;
    }
    return f;
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
    std::vector<double> w(n, h);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
    const int n = static_cast<int>(xs.size());
    if (m < 0 || n <= m) throw std::invalid_argument("fd_weights needs more samples than the derivative order");
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

}  // namespace outflow
