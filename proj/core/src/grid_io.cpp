#include "pxlap/grid_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace pxlap {

namespace {

constexpr char kMagic[4] = {'P', 'X', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <class T>
void put(std::ostream& os, T v) {
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("binary grid dump truncated");
    return to_little(v);
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const GridFunction& u) {
    const Domain& d = u.domain();
    os << (d.dim() == 1 ? "x,value\n" : "x,y,value\n");
    for (std::size_t k = 0; k < u.size(); ++k) {
        const Point x = d.point(k);
        for (int a = 0; a < d.dim(); ++a) os << format_number(x[a]) << ',';
        os << format_number(u[k]) << '\n';
    }
}

void write_csv(const std::string& path, const GridFunction& u) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_csv(os, u);
}

void write_binary(std::ostream& os, const GridFunction& u) {
    const Domain& d = u.domain();
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(d.dim()));
    for (int a = 0; a < d.dim(); ++a) put<double>(os, d.lower(a));
    for (int a = 0; a < d.dim(); ++a) put<double>(os, d.upper(a));
    for (int a = 0; a < d.dim(); ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(d.interior_count(a)));
    for (double v : u.values()) put<double>(os, v);
    for (NodeKind k : u.kinds()) put<std::uint8_t>(os, static_cast<std::uint8_t>(k));
}

void write_binary(const std::string& path, const GridFunction& u) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_binary(os, u);
}

GridFunction read_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a grid dump");
    if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("unsupported grid dump version");
    const auto dim = get<std::uint32_t>(is);
    if (dim != 1 && dim != 2) throw std::runtime_error("grid dump: bad dimension");
    std::array<double, 2> lo{}, hi{};
    std::array<int, 2> n{};
    for (std::uint32_t a = 0; a < dim; ++a) lo[a] = get<double>(is);
    for (std::uint32_t a = 0; a < dim; ++a) hi[a] = get<double>(is);
    for (std::uint32_t a = 0; a < dim; ++a) n[a] = static_cast<int>(get<std::uint32_t>(is));
    const Domain d = dim == 1 ? Domain::line(lo[0], hi[0], n[0]) : Domain::box(lo, hi, n);
    std::vector<double> values(d.size());
    for (double& v : values) v = get<double>(is);
    std::vector<NodeKind> kinds(d.size());
    for (NodeKind& k : kinds) {
        const auto raw = get<std::uint8_t>(is);
        if (raw > 2) throw std::runtime_error("grid dump: bad node kind");
        k = static_cast<NodeKind>(raw);
    }
    GridFunction u(d, std::move(values));
    u.set_kinds(std::move(kinds));
    return u;
}

GridFunction read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_binary(is);
}

}  // namespace pxlap
