#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "nsa/birman_schwinger.hpp"
#include "nsa/dense.hpp"
#include "nsa/error.hpp"
#include "nsa/potential.hpp"
#include "support.hpp"

using namespace nsa;

TEST_CASE("half potentials of a negative value")
{
    const TorusGrid g(1, 8, 8.0);
    Vector v = Vector::Zero(8);
    v[2] = -4.0;
    const auto half = half_potentials(PotentialField::scalar(g, v));
    CHECK(half.abs_half.scalar_at(2) == cplx(2.0, 0.0));
    CHECK(half.signed_half.scalar_at(2) == cplx(-2.0, 0.0));
    CHECK(half.signed_half.scalar_at(2) * half.abs_half.scalar_at(2) == cplx(-4.0, 0.0));
    CHECK(half.abs_half.scalar_at(0) == cplx(0.0, 0.0));
    CHECK(half.signed_half.scalar_at(0) == cplx(0.0, 0.0));
}

TEST_CASE("half potentials factor V pointwise")
{
    const TorusGrid g(1, 64, 8.0);
    const auto v = PotentialField::scalar(g, testing::random_vector(64, 3));
    const auto half = half_potentials(v);
    double worst = 0.0;
    for (long x = 0; x < 64; ++x)
        worst = std::max(worst, std::abs(half.signed_half.scalar_at(x) * half.abs_half.scalar_at(x) - v.scalar_at(x)));
    CHECK(worst < 1e-14);

    PotentialField m(g, 2);
    for (long x = 0; x < 64; x += 5)
        m.set(x, testing::random_matrix(2, 2, 100 + x));
    const auto mh = half_potentials(m);
    for (long x = 0; x < 64; x += 5) {
        const Matrix a = mh.abs_half.at(x);
        const Matrix b = mh.signed_half.at(x);
        CHECK((b * a - m.at(x)).norm() < 1e-13);
        // |V| = (V^* V)^{1/2}: |V|^{1/2} squared, then squared again
        CHECK(((a * a) * (a * a) - m.at(x).adjoint() * m.at(x)).norm() < 1e-12);
        CHECK((a - a.adjoint()).norm() < 1e-14);
    }
}

TEST_CASE("zero and single-site potentials")
{
    const TorusGrid g(1, 32, 8.0);
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    const auto zero = assemble_bs(spec, g, PotentialField(g, 1), cplx(-1.0, 0.5));
    CHECK(zero.singular_values().size() == 0);
    CHECK(schatten_norm(zero, 2.0).norm == 0.0);
    CHECK(bs_principle_check(zero) == 1.0);

    const auto dspec = SymbolSpec::make(SymbolKind::DiracMassless, 1);
    PotentialField one(g, 2);
    one.set(7, testing::random_matrix(2, 2, 1));
    const auto m = assemble_bs(dspec, g, one, cplx(0.1, 0.7));
    CHECK(m.full_dimension() == 64);
    int rank = 0;
    for (double s : dense::singular_values(m.matrix()))
        rank += s > 1e-12 ? 1 : 0;
    CHECK(rank <= 2);
}

TEST_CASE("Hilbert-Schmidt norm equals the weighted kernel double sum")
{
    const TorusGrid g(1, 64, 10.0);
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    const auto v = gaussian_well(g, {-2.0, 1.0}, 1.2);
    const cplx z(-0.5, 0.4);
    const auto m = assemble_bs(spec, g, v, z);

    // oracle: kernel by direct mode summation, then the double sum
    std::vector<cplx> kernel(64);
    for (long j = 0; j < 64; ++j) {
        cplx acc = 0.0;
        for (int slot = 0; slot < 64; ++slot) {
            const int k = g.frequency_index(slot);
            acc += std::polar(1.0, 2.0 * kPi * k * j / 64.0) / (std::pow(std::abs(k) / 10.0, 1.5) - z);
        }
        kernel[j] = acc / 10.0;
    }
    const double h = g.spacing();
    long double sum = 0.0L;
    for (long x = 0; x < 64; ++x)
        for (long y = 0; y < 64; ++y)
            sum += std::abs(v.scalar_at(x)) * std::abs(v.scalar_at(y)) * std::norm(kernel[g.difference(x, y)]) * h * h;
    const double hs = schatten_norm(m, 2.0).norm;
    CHECK(std::abs(hs * hs - static_cast<double>(sum)) < 1e-8 * static_cast<double>(sum));
    CHECK(m.operator_norm() <= hs + 1e-14);
}

TEST_CASE("Schatten norms of diag(3, 4)")
{
    RealVector sv(2);
    sv << 4.0, 3.0;
    CHECK(schatten_norm(sv, 1.0).norm == doctest::Approx(7.0));
    CHECK(schatten_norm(sv, 2.0).norm == doctest::Approx(5.0));
    CHECK(schatten_norm(sv, kInf).norm == 4.0);
    CHECK_THROWS_AS(schatten_norm(sv, 0.5), InvalidArgument);
    for (int t = 0; t < 10; ++t) {
        const RealVector s = dense::singular_values(testing::random_matrix(12, 12, 50 + t));
        double prev = kInf;
        for (double a : {1.0, 1.5, 2.0, 3.0, 7.0, kInf}) {
            const double n = schatten_norm(s, a).norm;
            CHECK(n <= prev * (1.0 + 1e-14));
            CHECK(n >= s[0] * (1.0 - 1e-14));
            prev = n;
        }
    }
}

TEST_CASE("regularized determinants")
{
    const Matrix m = testing::random_matrix(6, 6, 9) * 0.3;
    const Vector mu = dense::eigenvalues(m);
    const DetValue d1 = regularized_det(mu, 1);
    const cplx plain = (Matrix::Identity(6, 6) + m).determinant();
    CHECK(std::abs(d1.value - plain) < 1e-12 * std::abs(plain));

    Vector a(2);
    a << 1.0, -0.5;
    const DetValue d2 = regularized_det(a, 2);
    const double closed = 2.0 * std::exp(-1.0) * 0.5 * std::exp(0.5);
    CHECK(std::abs(d2.value - closed) < 1e-12);
    CHECK(d2.order == 2);
    CHECK_THROWS_AS(regularized_det(a, 0), InvalidArgument);

    Vector hit(1);
    hit << -1.0;
    CHECK(regularized_det(hit, 2).log_abs == -kInf);
}

TEST_CASE("log|det_n| <= Gamma_n ||M||_n^n on random matrices")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> scale(0.05, 3.0);
    for (int t = 0; t < 100; ++t) {
        const Matrix m = testing::random_matrix(8, 8, 1000 + t) * (scale(rng) / 8.0);
        const Vector mu = dense::eigenvalues(m);
        const RealVector sv = dense::singular_values(m);
        for (int n = 1; n <= 4; ++n) {
            const double bound = det_bound_constant(n) * std::pow(schatten_norm(sv, n).norm, n);
            CHECK(regularized_det(mu, n).log_abs <= bound + 1e-12);
        }
    }
    CHECK(det_bound_constant(1) == 1.0);
    CHECK(det_bound_constant(2) == 0.5);
}

TEST_CASE("the two orders have the same nonzero spectrum")
{
    const TorusGrid g(1, 64, 12.0);
    const auto spec = SymbolSpec::make(SymbolKind::Relativistic, 1, 1.0);
    const auto v = gaussian_well(g, {-1.5, 2.0}, 0.9, {1.0});
    const cplx z(-0.3, 0.2);
    const Vector a = assemble_bs(spec, g, v, z, BSOrder::AbsLeft).eigenvalues();
    const Vector b = assemble_bs(spec, g, v, z, BSOrder::AbsRight).eigenvalues();
    REQUIRE(a.size() == b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::abs(a[i]) < 1e-10)
            continue;
        double nearest = kInf;
        for (Eigen::Index j = 0; j < b.size(); ++j)
            nearest = std::min(nearest, std::abs(a[i] - b[j]));
        CHECK(nearest < 1e-8);
    }
}

TEST_CASE("small coupling stays away from -1")
{
    const TorusGrid g(1, 64, 12.0);
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    const auto v = gaussian_well(g, {-1.0, 0.5}, 1.0);
    const cplx z(-1.0, 0.3);
    const double s1 = assemble_bs(spec, g, v, z).operator_norm();
    const double t = 0.5 / s1;
    const auto small = assemble_bs(spec, g, v.scaled(t), z);
    CHECK(small.operator_norm() == doctest::Approx(0.5));
    CHECK(bs_principle_check(small) >= 1.0 - small.operator_norm());
}

TEST_CASE("regimes and Schatten exponents")
{
    const auto frac = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    CHECK(check_regime(frac, 1.0).ok);
    const auto bad = check_regime(frac, 0.5);
    CHECK(!bad.ok);
    CHECK(bad.message.find("potential assumption") != std::string::npos);
    CHECK(schatten_exponent(frac, 1.0) == 2.0);
    CHECK(det_order(2.0) == 2);

    const auto f2 = SymbolSpec::make(SymbolKind::FractionalLaplacian, 2, 1.5);
    CHECK(check_regime(f2, 1.4).regime == 'a');
    CHECK(schatten_exponent(f2, 1.4) == doctest::Approx(1.4 / 0.6));
    CHECK_THROWS_AS(schatten_exponent(f2, 1.0), InvalidArgument);

    CHECK(check_regime(SymbolSpec::make(SymbolKind::DiracMassless, 2), 1.0).regime == 'b');
    CHECK(schatten_exponent(SymbolSpec::make(SymbolKind::DiracMassless, 2), 1.0) == 3.0);
    CHECK(schatten_exponent(SymbolSpec::make(SymbolKind::DiracMassive, 3), 1.0) == 3.5);
    CHECK(det_order(3.5) == 4);
}

TEST_CASE("zero finder on a polynomial")
{
    // h(z) = (z - a)(z - b)(z - c) with c outside the box
    const cplx a(0.3, 0.2), b(-0.4, 0.7), c(3.0, 3.0);
    DetFunction h = [&](cplx z) {
        const cplx v = (z - a) * (z - b) * (z - c);
        DetValue out;
        out.value = v;
        out.log_abs = std::log(std::abs(v));
        out.arg = std::arg(v);
        return out;
    };
    const Rectangle box{-1.0, 1.0, -0.1, 1.0};
    CHECK(winding_number(h, box) == 2);
    const auto roots = find_det_zeros(h, box);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0].z - b) < 1e-12);
    CHECK(std::abs(roots[1].z - a) < 1e-12);
    CHECK_THROWS_AS(find_det_zeros(h, Rectangle{0.0, 0.0, 0.0, 1.0}), InvalidArgument);
}
