#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace outflow {

using Field = std::vector<double>;
using VectorField = std::vector<Field>;  // one Field per component

struct TrigMode {
    int k = 1;
    double a = 0.0;  // cosine amplitude
    double b = 0.0;  // sine amplitude
};

// n-th derivative of sum a_k cos(2 pi k x / period) + b_k sin(2 pi k x / period)
double trig_series(const std::vector<TrigMode>& modes, double period, double x, int n = 0);

// Boundary graph x1 = M(x2); M = sum a_k cos(2 pi k x2 / period) + b_k sin(...). d = 1 means M = 0.
class BoundaryShape {
public:
    static constexpr std::size_t max_modes = 64;

    BoundaryShape() = default;
    BoundaryShape(int d, double period, std::vector<TrigMode> modes);

    int dimension() const { return d_; }
    double period() const { return period_; }
    const std::vector<TrigMode>& modes() const { return modes_; }
    bool is_flat() const;

    // n-th derivative of M at x2 (n = 0 gives M)
    double derivative(double x2, int n) const;
    double M(double x2) const { return derivative(x2, 0); }
    double dM(double x2) const { return derivative(x2, 1); }
    double d2M(double x2) const { return derivative(x2, 2); }

private:
    int d_ = 1;
    double period_ = 1.0;
    std::vector<TrigMode> modes_;
};

// Outer unit normal (d components) at tangential coordinate x2.
std::vector<double> normal_vector(const BoundaryShape& shape, double x2);

using Point = std::array<double, 2>;
Point gamma_map(const BoundaryShape& shape, const Point& y);
Point gamma_inverse(const BoundaryShape& shape, const Point& x);

// Uniform grid in flattened coordinates; node (i, j) is stored at j * n1 + i.
class FlattenedGrid {
public:
    FlattenedGrid(const BoundaryShape& shape, std::size_t n1, double length, std::size_t n2 = 1);

    int d() const { return shape_.dimension(); }
    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    std::size_t size() const { return n1_ * n2_; }
    double length() const { return length_; }
    double period() const { return shape_.period(); }
    double h1() const { return h1_; }
    double h2() const { return h2_; }
    const BoundaryShape& shape() const { return shape_; }

    std::size_t idx(std::size_t i, std::size_t j) const { return j * n1_ + i; }
    double y1(std::size_t i) const { return h1_ * static_cast<double>(i); }
    double y2(std::size_t j) const { return h2_ * static_cast<double>(j); }

    // boundary shape and its derivatives at the tangential nodes
    const std::vector<double>& M() const { return M_; }
    const std::vector<double>& dM() const { return dM_; }
    const std::vector<double>& d2M() const { return d2M_; }
    // lower-left entry of the unit lower-triangular matrix A, i.e. -dM
    double a21(std::size_t j) const { return -dM_[j]; }

    Field zeros() const { return Field(size(), 0.0); }

private:
    BoundaryShape shape_;
    std::size_t n1_, n2_;
    double length_, h1_, h2_;
    std::vector<double> M_, dM_, d2M_;
};

VectorField hat_gradient(const FlattenedGrid& grid, const Field& f);
Field hat_divergence(const FlattenedGrid& grid, const VectorField& v);
Field hat_laplacian(const FlattenedGrid& grid, const Field& f);

// Plain centered-difference operators in y (same stencils, no metric terms).
VectorField plain_gradient(const FlattenedGrid& grid, const Field& f);
Field plain_divergence(const FlattenedGrid& grid, const VectorField& v);
Field plain_laplacian(const FlattenedGrid& grid, const Field& f);

// Second-order stencils used by the operators above, exposed for the solver and diagnostics.
struct Stencil {
    const FlattenedGrid& g;
    double d1(const Field& f, std::size_t i, std::size_t j) const;
    double d2(const Field& f, std::size_t i, std::size_t j) const;
    double d11(const Field& f, std::size_t i, std::size_t j) const;
    double d22(const Field& f, std::size_t i, std::size_t j) const;
    double d12(const Field& f, std::size_t i, std::size_t j) const;
    std::size_t jp(std::size_t j) const { return j + 1 == g.n2() ? 0 : j + 1; }
    std::size_t jm(std::size_t j) const { return j == 0 ? g.n2() - 1 : j - 1; }
};

}  // namespace outflow
