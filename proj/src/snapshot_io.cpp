#include "outflow/snapshot_io.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace outflow {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_snapshot(const std::string& base, const FieldState& s, const FlattenedGrid& grid) {
    std::ofstream hdr(base + ".hdr");
    if (!hdr) throw DomainError("io_error", "cannot write " + base + ".hdr");
    hdr << "format outflow-snapshot\n"
        << "version 1\n"
        << "dimension " << grid.d() << "\n"
        << "n1 " << grid.n1() << "\n"
        << "n2 " << grid.n2() << "\n"
        << "h1 " << exact(grid.h1()) << "\n"
        << "h2 " << exact(grid.h2()) << "\n"
        << "length " << exact(grid.length()) << "\n"
        << "period " << exact(grid.period()) << "\n"
        << "time " << exact(s.t) << "\n"
        << "fields rho" << (grid.d() == 2 ? " u1 u2" : " u1") << " theta\n"
        << "layout float64 little-endian row-major [n2][n1] per field\n";

    std::ofstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw DomainError("io_error", "cannot write " + base + ".bin");
    auto put = [&](const Field& f) {
        bin.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
    };
    put(s.rho);
    for (const auto& u : s.u) put(u);
    put(s.theta);
}

FieldState read_snapshot(const std::string& base, SnapshotHeader* header) {
    std::ifstream hdr(base + ".hdr");
    if (!hdr) throw DomainError("io_error", "cannot read " + base + ".hdr");
    SnapshotHeader h;
    std::string line;
    while (std::getline(hdr, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "dimension") ls >> h.dimension;
        else if (key == "n1") ls >> h.n1;
        else if (key == "n2") ls >> h.n2;
        else if (key == "h1") ls >> h.h1;
        else if (key == "h2") ls >> h.h2;
        else if (key == "length") ls >> h.length;
        else if (key == "period") ls >> h.period;
        else if (key == "time") ls >> h.time;
    }
    if (h.n1 == 0 || h.n2 == 0 || (h.dimension != 1 && h.dimension != 2))
        throw DomainError("io_error", "malformed snapshot header " + base + ".hdr");

    const std::size_t n = h.n1 * h.n2;
    FieldState s;
    s.t = h.time;
    std::ifstream bin(base + ".bin", std::ios::binary);
    if (!bin) throw DomainError("io_error", "cannot read " + base + ".bin");
    auto get = [&](Field& f) {
        f.resize(n);
        bin.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(n * sizeof(double)));
        if (!bin) throw DomainError("io_error", "truncated snapshot " + base + ".bin");
    };
    get(s.rho);
    s.u.resize(h.dimension);
    for (auto& u : s.u) get(u);
    get(s.theta);
    if (header) *header = h;
    return s;
}

}  // namespace outflow
