#include <doctest.h>

#include <sstream>

#include "nsa/error.hpp"
#include "nsa/potential.hpp"

using namespace nsa;

TEST_CASE("gaussian well has compact support")
{
    const TorusGrid g(1, 256, 40.0);
    const auto v = gaussian_well(g, {-3.0, 0.5}, 1.0);
    CHECK(v.scalar_at(128) == cplx(-3.0, 0.5));
    const auto support = v.support();
    CHECK(!support.empty());
    CHECK(static_cast<long>(support.size()) < g.sites());
    for (long x : support)
        CHECK(std::abs(g.position(x)[0]) <= 6.1);
}

TEST_CASE("family parsing")
{
    const TorusGrid g(2, 16, 8.0);
    const Json family = {{"name", "step"}, {"amplitude", {1.0, -1.0}}, {"radius", 1.2}};
    const auto v = make_potential(g, family);
    CHECK(v.scalar_at(g.flat_index({8, 8, 0})) == cplx(1.0, -1.0));
    CHECK(v.scalar_at(0) == cplx(0.0, 0.0));
    CHECK_THROWS_AS(make_potential(g, Json{{"name", "nope"}}), InvalidArgument);
    CHECK(make_potential(g, Json{{"name", "zero"}}).is_zero());
}

TEST_CASE("random bumps are reproducible")
{
    const TorusGrid g(1, 128, 30.0);
    RandomBumpParams p;
    p.seed = 42;
    const auto a = random_bumps(g, p);
    const auto b = random_bumps(g, p);
    CHECK(a.values() == b.values());
    p.seed = 43;
    CHECK(!(random_bumps(g, p).values() == a.values()));
}

TEST_CASE("dilation rescales the grid and the values")
{
    const TorusGrid g(1, 64, 10.0);
    const auto v = gaussian_well(g, {-1.0, 0.0}, 1.0);
    const auto w = dilate(v, 2.0, 1.5);
    CHECK(w.grid().length() == 5.0);
    CHECK(w.grid().points() == 64);
    CHECK(std::abs(w.scalar_at(32) - std::pow(2.0, 1.5) * v.scalar_at(32)) < 1e-15);
}

TEST_CASE("table round trip")
{
    const TorusGrid g(1, 16, 4.0);
    const auto v = gaussian_well(g, {2.0, -1.0}, 0.7);
    std::stringstream io;
    write_potential_table(io, v);
    const auto back = read_potential(io);
    CHECK(back.grid == g);
    CHECK((back.field.values() - v.values()).norm() == 0.0);

    std::stringstream bad("{\"grid\": {\"d\": 1, \"N\": 16, \"L\": 4.0}, \"table\": [[1, 0]]}");
    CHECK_THROWS_AS(read_potential(bad), InvalidArgument);
    std::stringstream junk("not json");
    CHECK_THROWS_AS(read_potential(junk), InvalidArgument);
}

TEST_CASE("Fourier resampling of a trigonometric polynomial is exact")
{
    const TorusGrid g(2, 8, 6.0);
    auto trig = [](const TorusGrid& grid) {
        Vector v(grid.sites());
        for (long x = 0; x < grid.sites(); ++x) {
            const auto p = grid.position(x);
            const double a = 2.0 * kPi * p[0] / 6.0, b = 2.0 * kPi * p[1] / 6.0;
            v[x] = cplx(1.0 + std::cos(a) - 0.5 * std::sin(2.0 * b), 0.3 * std::cos(a + b) + 0.2 * std::sin(3.0 * a));
        }
        return PotentialField::scalar(grid, v);
    };
    const auto v = trig(g);
    const auto fine = fourier_resample(v, g.refined(2));
    CHECK((fine.values() - trig(g.refined(2)).values()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((fourier_resample(fine, g).values() - v.values()).cwiseAbs().maxCoeff() < 1e-13);

    const auto m = v.broadcast(2);
    const auto mf = fourier_resample(m, g.refined(2));
    const long x = g.refined(2).sites() / 3;
    CHECK((mf.at(x) - fine.scalar_at(x) * Matrix::Identity(2, 2)).norm() < 1e-13);
    CHECK_THROWS_AS(fourier_resample(v, g.rescaled(2.0)), GridMismatch);
}
