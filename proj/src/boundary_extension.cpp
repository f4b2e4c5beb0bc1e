#include "outflow/boundary_extension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "outflow/errors.hpp"
#include "outflow/numerics.hpp"

namespace outflow {

double cutoff(double s) {
    const double t = std::clamp(s, 0.0, 1.0);
    return 1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double cutoff_d1(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return -30.0 * s * s * (s - 1.0) * (s - 1.0);
}

double cutoff_d2(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return -60.0 * s * (s - 1.0) * (2.0 * s - 1.0);
}

namespace {

BoundaryData empty_data(const FlattenedGrid& grid, const PlanarBoundaryData& ref) {
    BoundaryData bd;
    const std::size_t n2 = grid.n2();
    bd.u_b.assign(grid.d(), Field(n2, 0.0));
    bd.du_b = bd.u_b;
    bd.d2u_b = bd.u_b;
    bd.theta_b.assign(n2, ref.theta_b);
    bd.dtheta_b.assign(n2, 0.0);
    bd.d2theta_b.assign(n2, 0.0);
    bd.reference = ref;
    return bd;
}

}  // namespace

BoundaryData planar_boundary_data(const FlattenedGrid& grid, const PlanarBoundaryData& ref) {
    BoundaryData bd = empty_data(grid, ref);
    std::fill(bd.u_b[0].begin(), bd.u_b[0].end(), ref.u_b);
    return bd;
}

BoundaryData normal_outflow_boundary_data(const FlattenedGrid& grid, const PlanarBoundaryData& ref) {
    BoundaryData bd = empty_data(grid, ref);
    const double a = std::abs(ref.u_b);
    const auto& shape = grid.shape();
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        if (grid.d() == 1) {
            bd.u_b[0][j] = -a;
            continue;
        }
        const double x2 = grid.y2(j);
        const double p = shape.derivative(x2, 1), p1 = shape.derivative(x2, 2), p2 = shape.derivative(x2, 3);
        const double s = std::sqrt(1.0 + p * p), s3 = s * s * s, s5 = s3 * s * s;
        bd.u_b[0][j] = -a / s;
        bd.du_b[0][j] = a * p * p1 / s3;
        bd.d2u_b[0][j] = a * ((p1 * p1 + p * p2) / s3 - 3.0 * p * p * p1 * p1 / s5);
        bd.u_b[1][j] = a * p / s;
        bd.du_b[1][j] = a * p1 / s3;
        bd.d2u_b[1][j] = a * (p2 / s3 - 3.0 * p * p1 * p1 / s5);
    }
    return bd;
}

BoundaryData series_boundary_data(const FlattenedGrid& grid, const PlanarBoundaryData& ref,
                                  const std::vector<std::vector<TrigMode>>& u_series,
                                  const std::vector<TrigMode>& theta_series) {
    if (static_cast<int>(u_series.size()) > grid.d())
        throw ConfigError("invalid_boundary_data", "more velocity series than dimensions");
    BoundaryData bd = planar_boundary_data(grid, ref);
    const double ell = grid.period();
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const double x2 = grid.y2(j);
        for (std::size_t c = 0; c < u_series.size(); ++c) {
            bd.u_b[c][j] += trig_series(u_series[c], ell, x2, 0);
            if (grid.d() == 2) {
                bd.du_b[c][j] = trig_series(u_series[c], ell, x2, 1);
                bd.d2u_b[c][j] = trig_series(u_series[c], ell, x2, 2);
            }
        }
        bd.theta_b[j] += trig_series(theta_series, ell, x2, 0);
        if (grid.d() == 2) {
            bd.dtheta_b[j] = trig_series(theta_series, ell, x2, 1);
            bd.d2theta_b[j] = trig_series(theta_series, ell, x2, 2);
        }
    }
    return bd;
}

void validate_boundary_data(const BoundaryData& bd, const FlattenedGrid& grid, const OutflowThresholds& th) {
    if (bd.d() != grid.d() || bd.n2() != grid.n2())
        throw DomainError("grid_mismatch", "boundary data does not match the grid");
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        const auto n = normal_vector(grid.shape(), grid.y2(j));
        double un = 0;
        for (int c = 0; c < grid.d(); ++c) un += bd.u_b[c][j] * n[c];
        if (!(un > th.c1))
            throw DomainError("outflow_violation", "u_b . n = " + std::to_string(un) + " at tangential node " +
                                                       std::to_string(j) + " (x2 = " + std::to_string(grid.y2(j)) + ")");
        if (!(bd.theta_b[j] > th.c2))
            throw DomainError("outflow_violation", "boundary temperature below threshold at tangential node " +
                                                       std::to_string(j));
    }
}

double boundary_deviation_norm(const BoundaryData& bd, const FlattenedGrid& grid) {
    auto dev_u = [&](int c, std::size_t j) { return bd.u_b[c][j] - (c == 0 ? bd.reference.u_b : 0.0); };
    if (grid.d() == 1) return std::abs(dev_u(0, 0)) + std::abs(bd.theta_b[0] - bd.reference.theta_b);
    double s = 0;
    for (std::size_t j = 0; j < grid.n2(); ++j) {
        for (int c = 0; c < grid.d(); ++c) {
            const double v = dev_u(c, j);
            s += v * v + bd.du_b[c][j] * bd.du_b[c][j] + bd.d2u_b[c][j] * bd.d2u_b[c][j];
        }
        const double t = bd.theta_b[j] - bd.reference.theta_b;
        s += t * t + bd.dtheta_b[j] * bd.dtheta_b[j] + bd.d2theta_b[j] * bd.d2theta_b[j];
    }
    return std::sqrt(s * grid.h2());
}

Extension build_extension(const BoundaryData& bd, const FlattenedGrid& grid, const OutflowThresholds& th) {
    validate_boundary_data(bd, grid, th);
    Extension ext;
    ext.data = bd;
    ext.field.U.assign(grid.d(), grid.zeros());
    ext.field.Theta = grid.zeros();
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const double c = cutoff(grid.y1(i));
            const std::size_t k = grid.idx(i, j);
            for (int q = 0; q < grid.d(); ++q)
                ext.field.U[q][k] = (bd.u_b[q][j] - (q == 0 ? bd.reference.u_b : 0.0)) * c;
            ext.field.Theta[k] = (bd.theta_b[j] - bd.reference.theta_b) * c;
        }
    return ext;
}

namespace {

ComponentDerivatives lift(const FlattenedGrid& grid, const Field& dev, const Field& ddev, const Field& d2dev) {
    ComponentDerivatives cd;
    for (Field* f : {&cd.v, &cd.d1, &cd.d2, &cd.d11, &cd.d22, &cd.d12}) f->assign(grid.size(), 0.0);
    for (std::size_t j = 0; j < grid.n2(); ++j)
        for (std::size_t i = 0; i < grid.n1(); ++i) {
            const double y = grid.y1(i);
            const double c = cutoff(y), c1 = cutoff_d1(y), c2 = cutoff_d2(y);
            const std::size_t k = grid.idx(i, j);
            cd.v[k] = dev[j] * c;
            cd.d1[k] = dev[j] * c1;
            cd.d11[k] = dev[j] * c2;
            cd.d2[k] = ddev[j] * c;
            cd.d22[k] = d2dev[j] * c;
            cd.d12[k] = ddev[j] * c1;
        }
    return cd;
}

}  // namespace

ExtensionDerivatives extension_derivatives(const Extension& ext, const FlattenedGrid& grid) {
    const BoundaryData& bd = ext.data;
    ExtensionDerivatives out;
    for (int q = 0; q < grid.d(); ++q) {
        Field dev = bd.u_b[q];
        if (q == 0)
            for (double& v : dev) v -= bd.reference.u_b;
        out.U.push_back(lift(grid, dev, bd.du_b[q], bd.d2u_b[q]));
    }
    Field tdev = bd.theta_b;
    for (double& v : tdev) v -= bd.reference.theta_b;
    out.Theta = lift(grid, tdev, bd.dtheta_b, bd.d2theta_b);
    return out;
}

ExtensionNorms extension_norms(const Extension& ext, const FlattenedGrid& grid, const FarFieldState& ff) {
    const Stencil st{grid};
    const auto w1 = trapezoid_weights(grid.n1(), grid.h1());
    const double w2 = grid.d() == 2 ? grid.h2() : 1.0;
    double l2 = 0, g1 = 0, g2 = 0;
    std::vector<const Field*> comps;
    for (const auto& u : ext.field.U) comps.push_back(&u);
    comps.push_back(&ext.field.Theta);
    for (const Field* f : comps)
        for (std::size_t j = 0; j < grid.n2(); ++j)
            for (std::size_t i = 0; i < grid.n1(); ++i) {
                const double w = w1[i] * w2;
                const double v = (*f)[grid.idx(i, j)];
                const double a = st.d1(*f, i, j), b = st.d2(*f, i, j);
                const double aa = st.d11(*f, i, j), bb = st.d22(*f, i, j), ab = st.d12(*f, i, j);
                l2 += w * v * v;
                g1 += w * (a * a + b * b);
                g2 += w * (aa * aa + bb * bb + 2.0 * ab * ab);
            }
    ExtensionNorms n;
    n.l2 = std::sqrt(l2);
    n.h1 = std::sqrt(l2 + g1);
    n.h2 = std::sqrt(l2 + g1 + g2);
    n.delta = boundary_deviation_norm(ext.data, grid) + ext.data.reference.strength(ff);
    n.ratio = n.delta > 0 ? n.h2 / n.delta : 0.0;
    return n;
}

}  // namespace outflow
