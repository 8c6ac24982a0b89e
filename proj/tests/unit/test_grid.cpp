#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "pxlap/grid.hpp"
#include "pxlap/grid_io.hpp"

using namespace pxlap;

TEST_CASE("node coordinates include both boundary points") {
    const Domain d = Domain::line(0.0, 1.0, 3);
    CHECK(d.node_count(0) == 5);
    CHECK(d.spacing(0) == doctest::Approx(0.25));
    CHECK(d.coordinate(0, 0) == 0.0);
    CHECK(d.coordinate(0, 4) == 1.0);
    CHECK(d.on_edge(std::size_t{0}));
    CHECK_FALSE(d.on_edge(std::size_t{2}));
}

TEST_CASE("flat index runs axis 0 fastest") {
    const Domain d = Domain::box({0.0, 0.0}, {1.0, 2.0}, {3, 4});
    CHECK(d.flat({1, 0}) == 1);
    CHECK(d.flat({0, 1}) == 5);
    for (std::size_t k = 0; k < d.size(); ++k) CHECK(d.flat(d.unflat(k)) == k);
    const Point x = d.point(NodeIndex{4, 5});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));
}

TEST_CASE("trapezoidal rule is exact for affine integrands") {
    const Domain d = Domain::box({0.0, 0.0}, {2.0, 1.0}, {7, 5});
    const auto f = GridFunction::sample(d, [](const Point& x) { return 1.0 + 3.0 * x[0] - x[1]; });
    // int_0^2 int_0^1 (1 + 3x - y) = 2 + 6 - 1
    CHECK(integrate(f) == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("trapezoidal rule converges at second order") {
    double prev = 0.0;
    for (int n : {15, 31, 63}) {
        const Domain d = Domain::line(0.0, 1.0, n);
        const auto f = GridFunction::sample(d, [](const Point& x) { return x[0] * x[0]; });
        const double err = std::abs(integrate(f) - 1.0 / 3.0);
        const double h = d.spacing(0);
        CHECK(err == doctest::Approx(h * h / 6.0).epsilon(1e-10));
        if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.01));
        prev = err;
    }
}

TEST_CASE("centered jets are exact on quadratics") {
    const Domain d = Domain::box({-1.0, -1.0}, {1.0, 1.0}, {9, 9});
    const auto u = GridFunction::sample(d, [](const Point& x) {
        return 1.0 + 2.0 * x[0] + 3.0 * x[1] + x[0] * x[0] + x[0] * x[1] - x[1] * x[1];
    });
    const NodeIndex k{3, 6};
    const Point x = d.point(k);
    const Jet j = discrete_jet(u, k);
    CHECK(j.eta[0] == doctest::Approx(2.0 + 2.0 * x[0] + x[1]));
    CHECK(j.eta[1] == doctest::Approx(3.0 + x[0] - 2.0 * x[1]));
    CHECK(j.hess(0, 0) == doctest::Approx(2.0));
    CHECK(j.hess(0, 1) == doctest::Approx(1.0));
    CHECK(j.hess(1, 0) == doctest::Approx(1.0));
    CHECK(j.hess(1, 1) == doctest::Approx(-2.0));
}

TEST_CASE("annulus restriction classifies nodes") {
    const Domain d = Domain::box({-1.5, -1.5}, {1.5, 1.5}, {31, 31});
    GridFunction u(d);
    Point c(2);
    c << 0.0, 0.0;
    u.restrict_to_annulus(c, 0.5, 1.5);
    std::size_t interior = 0, boundary = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double r = d.point(k).norm();
        if (u.is_interior(k)) {
            ++interior;
            CHECK(r > 0.5);
            CHECK(r < 1.5);
        } else if (u.kind(k) == NodeKind::boundary) {
            ++boundary;
        }
    }
    CHECK(interior > 0);
    CHECK(boundary > 0);
    // the centre node is exterior: nothing within one cell is interior
    CHECK(u.kind(d.flat({16, 16})) == NodeKind::exterior);
}

TEST_CASE("non-finite values are rejected") {
    GridFunction u(Domain::line(0.0, 1.0, 4));
    u[2] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(u.all_finite());
    CHECK_THROWS_AS(u.check_finite(), std::invalid_argument);
}

TEST_CASE("binary dump round trips values and kinds") {
    const Domain d = Domain::box({-1.5, -1.5}, {1.5, 1.5}, {8, 6});
    auto u = GridFunction::sample(d, [](const Point& x) { return std::sin(x[0]) * std::exp(x[1]); });
    Point c(2);
    c << 0.0, 0.0;
    u.restrict_to_annulus(c, 0.5, 1.5);
    std::stringstream ss;
    write_binary(ss, u);
    CHECK(ss.str().substr(0, 4) == "PXGF");
    const GridFunction v = read_binary(ss);
    CHECK(v.domain() == d);
    for (std::size_t k = 0; k < u.size(); ++k) {
        CHECK(v[k] == u[k]);
        CHECK(v.kind(k) == u.kind(k));
    }
}

TEST_CASE("csv has a header and one row per node") {
    const auto u = GridFunction::sample(Domain::line(0.0, 1.0, 2), [](const Point& x) { return x[0]; });
    std::ostringstream os;
    write_csv(os, u);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,value");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
}
