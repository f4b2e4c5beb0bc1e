#include "outflow/geometry.hpp"

#include <cmath>
#include <numbers>

#include "outflow/errors.hpp"

namespace outflow {

BoundaryShape::BoundaryShape(int d, double period, std::vector<TrigMode> modes)
    : d_(d), period_(period), modes_(std::move(modes)) {
    if (d != 1 && d != 2) throw ConfigError("invalid_shape", "dimension must be 1 or 2");
    if (!(period > 0)) throw ConfigError("invalid_shape", "tangential period must be positive");
    if (modes_.size() > max_modes) throw ConfigError("invalid_shape", "too many boundary modes");
    for (const auto& m : modes_)
        if (m.k < 0) throw ConfigError("invalid_shape", "wavenumbers must be nonnegative");
    if (d == 1 && !is_flat()) throw ConfigError("invalid_shape", "a 1-D boundary must be flat");
}

bool BoundaryShape::is_flat() const {
    for (const auto& m : modes_)
        if (m.a != 0.0 || (m.k != 0 && m.b != 0.0)) return false;
    return true;
}

double BoundaryShape::derivative(double x2, int n) const { return trig_series(modes_, period_, x2, n); }

double trig_series(const std::vector<TrigMode>& modes, double period, double x2, int n) {
    double s = 0.0;
    for (const auto& m : modes) {
        const double w = 2.0 * std::numbers::pi * m.k / period;
        const double c = std::cos(w * x2), sn = std::sin(w * x2);
        if (n == 0) {
            s += m.a * c + m.b * sn;
            continue;
        }
        if (m.k == 0) continue;
        // d^n/dx^n of (a cos + b sin) cycles through (c, -s, -c, s) patterns
        const double wn = std::pow(w, n);
        switch (n % 4) {
            case 0: s += wn * (m.a * c + m.b * sn); break;
            case 1: s += wn * (-m.a * sn + m.b * c); break;
            case 2: s += wn * (-m.a * c - m.b * sn); break;
            default: s += wn * (m.a * sn - m.b * c); break;
        }
    }
    return s;
}

std::vector<double> normal_vector(const BoundaryShape& shape, double x2) {
    if (shape.dimension() == 1) return {-1.0};
    const double p = shape.dM(x2);
    const double s = std::sqrt(1.0 + p * p);
    return {-1.0 / s, p / s};
}

Point gamma_map(const BoundaryShape& shape, const Point& y) {
    if (shape.dimension() == 1) return y;
    return {y[0] + shape.M(y[1]), y[1]};
}

Point gamma_inverse(const BoundaryShape& shape, const Point& x) {
    if (shape.dimension() == 1) return x;
    return {x[0] - shape.M(x[1]), x[1]};
}

FlattenedGrid::FlattenedGrid(const BoundaryShape& shape, std::size_t n1, double length, std::size_t n2)
    : shape_(shape), n1_(n1), n2_(shape.dimension() == 1 ? 1 : n2), length_(length) {
    if (n1_ < 5) throw ConfigError("grid_too_small", "at least 5 nodes are needed in y1");
    if (!(length > 0)) throw ConfigError("invalid_grid", "domain length must be positive");
    if (shape.dimension() == 2 && n2_ < 4) throw ConfigError("grid_too_small", "at least 4 tangential nodes are needed");
    h1_ = length / static_cast<double>(n1_ - 1);
    h2_ = shape.dimension() == 2 ? shape.period() / static_cast<double>(n2_) : 0.0;
    M_.resize(n2_);
    dM_.resize(n2_);
    d2M_.resize(n2_);
    for (std::size_t j = 0; j < n2_; ++j) {
        const double x2 = y2(j);
        M_[j] = shape.M(x2);
        dM_[j] = shape.dM(x2);
        d2M_[j] = shape.d2M(x2);
    }
}

double Stencil::d1(const Field& f, std::size_t i, std::size_t j) const {
    const std::size_t n = g.n1(), k = g.idx(i, j);
    const double h = g.h1();
    if (i == 0) return (-3.0 * f[k] + 4.0 * f[k + 1] - f[k + 2]) / (2.0 * h);
    if (i == n - 1) return (3.0 * f[k] - 4.0 * f[k - 1] + f[k - 2]) / (2.0 * h);
    return (f[k + 1] - f[k - 1]) / (2.0 * h);
}

double Stencil::d2(const Field& f, std::size_t i, std::size_t j) const {
    if (g.d() == 1) return 0.0;
    return (f[g.idx(i, jp(j))] - f[g.idx(i, jm(j))]) / (2.0 * g.h2());
}

double Stencil::d11(const Field& f, std::size_t i, std::size_t j) const {
    const std::size_t n = g.n1(), k = g.idx(i, j);
    const double h2 = g.h1() * g.h1();
    if (i == 0) return (2.0 * f[k] - 5.0 * f[k + 1] + 4.0 * f[k + 2] - f[k + 3]) / h2;
    if (i == n - 1) return (2.0 * f[k] - 5.0 * f[k - 1] + 4.0 * f[k - 2] - f[k - 3]) / h2;
    return (f[k + 1] - 2.0 * f[k] + f[k - 1]) / h2;
}

double Stencil::d22(const Field& f, std::size_t i, std::size_t j) const {
    if (g.d() == 1) return 0.0;
    return (f[g.idx(i, jp(j))] - 2.0 * f[g.idx(i, j)] + f[g.idx(i, jm(j))]) / (g.h2() * g.h2());
}

double Stencil::d12(const Field& f, std::size_t i, std::size_t j) const {
    if (g.d() == 1) return 0.0;
    const std::size_t n = g.n1(), a = g.idx(i, jp(j)), b = g.idx(i, jm(j));
    const double h = g.h1(), s = 2.0 * g.h2();
    if (i == 0)
        return ((-3.0 * f[a] + 4.0 * f[a + 1] - f[a + 2]) - (-3.0 * f[b] + 4.0 * f[b + 1] - f[b + 2])) / (2.0 * h * s);
    if (i == n - 1)
        return ((3.0 * f[a] - 4.0 * f[a - 1] + f[a - 2]) - (3.0 * f[b] - 4.0 * f[b - 1] + f[b - 2])) / (2.0 * h * s);
    return ((f[a + 1] - f[a - 1]) - (f[b + 1] - f[b - 1])) / (2.0 * h * s);
}

VectorField hat_gradient(const FlattenedGrid& grid, const Field& f) {
    const Stencil st{grid};
    VectorField out(grid.d(), grid.zeros());
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            const double f1 = st.d1(f, i, j);
            out[0][k] = f1;
            if (grid.d() == 2) out[1][k] = st.d2(f, i, j) - grid.dM()[j] * f1;
        }
    return out;
}

Field hat_divergence(const FlattenedGrid& grid, const VectorField& v) {
    const Stencil st{grid};
    Field out = grid.zeros();
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            double s = st.d1(v[0], i, j);
            if (grid.d() == 2) s += st.d2(v[1], i, j) - grid.dM()[j] * st.d1(v[1], i, j);
            out[grid.idx(i, j)] = s;
        }
    return out;
}

Field hat_laplacian(const FlattenedGrid& grid, const Field& f) {
    const Stencil st{grid};
    Field out = grid.zeros();
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            double s = st.d11(f, i, j);
            if (grid.d() == 2) {
                const double p = grid.dM()[j], q = grid.d2M()[j];
                s = (1.0 + p * p) * s + st.d22(f, i, j) - 2.0 * p * st.d12(f, i, j) - q * st.d1(f, i, j);
            }
            out[grid.idx(i, j)] = s;
        }
    return out;
}

VectorField plain_gradient(const FlattenedGrid& grid, const Field& f) {
    const Stencil st{grid};
    VectorField out(grid.d(), grid.zeros());
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const std::size_t k = grid.idx(i, j);
            out[0][k] = st.d1(f, i, j);
            if (grid.d() == 2) out[1][k] = st.d2(f, i, j);
        }
    return out;
}

Field plain_divergence(const FlattenedGrid& grid, const VectorField& v) {
    const Stencil st{grid};
    Field out = grid.zeros();
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            double s = st.d1(v[0], i, j);
            if (grid.d() == 2) s += st.d2(v[1], i, j);
            out[grid.idx(i, j)] = s;
        }
    return out;
}

Field plain_laplacian(const FlattenedGrid& grid, const Field& f) {
    const Stencil st{grid};
    Field out = grid.zeros();
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            double s = st.d11(f, i, j);
            if (grid.d() == 2) s += st.d22(f, i, j);
            out[grid.idx(i, j)] = s;
        }
    return out;
}

}  // namespace outflow
