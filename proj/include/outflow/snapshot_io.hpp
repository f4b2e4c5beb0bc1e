#pragma once

#include <string>

#include "outflow/pde_solver.hpp"

namespace outflow {

// Snapshot layout: `<base>.bin` holds the fields rho, u1[, u2], theta one after another,
// each as n2 rows of n1 little-endian float64 values (row-major, y1 fastest).
// `<base>.hdr` is a plain-text header with dimensions, spacing, time and field order.
struct SnapshotHeader {
    int dimension = 1;
    std::size_t n1 = 0, n2 = 1;
    double h1 = 0, h2 = 0, length = 0, period = 0, time = 0;
};

void write_snapshot(const std::string& base, const FieldState& s, const FlattenedGrid& grid);
FieldState read_snapshot(const std::string& base, SnapshotHeader* header = nullptr);

}  // namespace outflow
