#include <doctest.h>

#include <cmath>
#include <random>

#include "nsa/error.hpp"
#include "nsa/resolvent.hpp"
#include "support.hpp"

using namespace nsa;

namespace {

// K(j) = L^{-d} sum_k m(xi_k) e^{2 pi i k.j/N}, summed mode by mode (d = 1)
Matrix direct_kernel_1d(const TorusGrid& g, long j, const std::function<Matrix(double)>& m)
{
    Matrix acc;
    for (int slot = 0; slot < g.points(); ++slot) {
        const int k = g.frequency_index(slot);
        const Matrix term = m(k / g.length()) * std::polar(1.0, 2.0 * kPi * k * j / g.points());
        acc = acc.size() == 0 ? term : Matrix(acc + term);
    }
    return acc / g.length();
}

}  // namespace

TEST_CASE("plane wave is divided by T(xi_k) - z")
{
    const TorusGrid g(1, 64, 10.0);
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    const cplx z(0.7, 0.3);
    const ResolventHandle h(spec, g, z);
    const int k = -7;
    GridFunction f(g, 1);
    for (long x = 0; x < g.sites(); ++x)
        f(x, 0) = std::polar(1.0, 2.0 * kPi * k * x / 64.0);
    const cplx factor = 1.0 / (std::pow(7.0 / 10.0, 1.5) - z);
    CHECK(testing::rel_err(resolvent_apply(h, f).values, factor * f.values) < 1e-13);
}

TEST_CASE("(T - z) R0(z) f = f")
{
    for (SymbolKind kind : {SymbolKind::FractionalLaplacian, SymbolKind::Relativistic, SymbolKind::DiracMassless,
                            SymbolKind::DiracMassive}) {
        const TorusGrid g(2, 16, 6.0);
        const auto spec = SymbolSpec::make(kind, 2, 1.0);
        const cplx z(0.4, 0.2);
        const ResolventHandle h(spec, g, z);
        const GridFunction f = testing::random_function(g, spec.n, 9);
        const GridFunction u = resolvent_apply(h, f);
        const GridFunction back = apply_multiplier(symbol_table(spec, g).shifted(-z), u);
        CHECK(testing::rel_err(back.values, f.values) < 1e-10);
    }
}

TEST_CASE("z on a lattice level is rejected with the mode")
{
    const TorusGrid g(1, 16, 4.0);
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.0);
    try {
        ResolventHandle h(spec, g, cplx(0.5, 0.0));  // |xi| = 2/4 at k = +-2
        FAIL("expected ResolventError");
    } catch (const ResolventError& e) {
        CHECK((e.mode() == 2 || e.mode() == 14));
    }
}

TEST_CASE("Dirac resolvent equals (D + z)(-Delta + m^2 - z^2)^{-1}")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (SymbolKind kind : {SymbolKind::DiracMassless, SymbolKind::DiracMassive}) {
        for (int d = 1; d <= 2; ++d) {
            const TorusGrid g(d, d == 1 ? 64 : 16, 7.0);
            const auto spec = SymbolSpec::make(kind, d);
            for (int trial = 0; trial < 4; ++trial) {
                const cplx z(u(rng), 0.1 + std::abs(u(rng)));
                const GridFunction f = testing::random_function(g, spec.n, 100 + trial);
                const GridFunction a = resolvent_apply(ResolventHandle(spec, g, z), f);
                const GridFunction b = dirac_factorized_apply(spec, g, z, f);
                CHECK(testing::rel_err(a.values, b.values) < 1e-10);
            }
        }
    }
    CHECK_THROWS_AS(dirac_factorized_table(SymbolSpec::make(SymbolKind::Relativistic, 1), TorusGrid(1, 8, 1.0), 1.0),
                    InvalidArgument);
}

TEST_CASE("massless Dirac kernel matches the factorized mode sum")
{
    const TorusGrid g(1, 32, 5.0);
    const auto spec = SymbolSpec::make(SymbolKind::DiracMassless, 1);
    const cplx z(0.3, 0.8);
    const Vector kernel = resolvent_kernel_full(ResolventHandle(spec, g, z));
    const CliffordSet c = clifford_generators(1);
    for (long j : {0L, 1L, 7L, 16L, 31L}) {
        const Matrix oracle = direct_kernel_1d(g, j, [&](double xi) {
            return Matrix((c.alpha[0] * xi + z * Matrix::Identity(2, 2)) / (xi * xi - z * z));
        });
        const Matrix got = Eigen::Map<const Matrix>(kernel.data() + j * 4, 2, 2);
        CHECK((got - oracle).norm() < 1e-9 * std::max(1.0, oracle.norm()));
    }
}

TEST_CASE("radial kernel is symmetric under r -> L - r")
{
    const TorusGrid g(1, 64, 9.0);
    const auto spec = SymbolSpec::make(SymbolKind::Relativistic, 1, 1.0);
    const Vector kernel = resolvent_kernel_full(ResolventHandle(spec, g, cplx(-0.5, 0.2)));
    for (long j = 1; j < 32; ++j)
        CHECK(std::abs(kernel[j] - kernel[64 - j]) < 1e-12 * std::abs(kernel[j]) + 1e-15);
    const KernelSample s = resolvent_kernel(ResolventHandle(spec, g, cplx(-0.5, 0.2)));
    CHECK(s.radii.back() <= 4.5 + 1e-12);
    CHECK(s.radii.front() > 0.0);
}

TEST_CASE("|xi|^2 kernel at z = -1 matches a direct mode sum")
{
    const TorusGrid g(1, 128, 8.0);
    const auto spec = SymbolSpec::make_radial(1, 2.0, [](double r) { return r * r; });
    const Vector kernel = resolvent_kernel_full(ResolventHandle(spec, g, -1.0));
    for (long j : {0L, 3L, 20L, 64L}) {
        const Matrix oracle = direct_kernel_1d(g, j, [](double xi) {
            return Matrix::Constant(1, 1, cplx(1.0 / (xi * xi + 1.0), 0.0));
        });
        CHECK(std::abs(kernel[j] - oracle(0, 0)) < 1e-9);
    }
    // the continuum kernel of (D^2 + 1)^{-1} with D = (2 pi i)^{-1} d/dx is pi e^{-2 pi |x|}
    const double x = 3 * g.spacing();
    CHECK(kernel[3].real() == doctest::Approx(kPi * std::exp(-2.0 * kPi * x)).epsilon(1e-2));
}

TEST_CASE("fractional kernel scales exactly under co-rescaling")
{
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    const TorusGrid g(1, 64, 12.0);
    const cplx z(-2.0, 3.0);
    const double az = std::abs(z);
    const TorusGrid g2 = g.rescaled(std::pow(az, 1.0 / 1.5));
    const Vector k1 = resolvent_kernel_full(ResolventHandle(spec, g, z));
    const Vector k2 = resolvent_kernel_full(ResolventHandle(spec, g2, z / az));
    CHECK(testing::rel_err(k1, std::pow(az, 1.0 / 1.5 - 1.0) * k2) < 1e-12);
}

TEST_CASE("kernel envelope")
{
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 2, 1.6);
    std::vector<cplx> zs;
    for (int i = 0; i < 16; ++i) {
        const double a = 0.1 + (2.0 * kPi - 0.2) * i / 15.0;
        zs.push_back(std::polar(1.0, a));
    }
    const TorusGrid g(2, 64, 8.0, 1L << 15);
    double lo = kInf, hi = 0.0;
    for (const cplx z : zs) {
        const cplx one[1] = {z};
        const double c = kernel_envelope_fit(spec, g, one, 1.0).constant;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    CHECK(hi < 2.0 * lo);
    // the r -> 0 limit is the Riesz constant pi^{s-d/2} Gamma((d-s)/2)/Gamma(s/2)
    CHECK(lo >= std::pow(kPi, 0.6) * std::tgamma(0.2) / std::tgamma(0.8) * (1.0 - 1e-12));
    const EnvelopeFit coarse = kernel_envelope_fit(spec, g, zs, 1.0);
    const EnvelopeFit fine = kernel_envelope_fit(spec, g.refined(2), zs, 1.0);
    CHECK(std::abs(fine.constant - coarse.constant) < 0.1 * coarse.constant);
    CHECK(coarse.r_at <= 1.0);
    CHECK_THROWS_AS(kernel_envelope_fit(spec, g, std::span<const cplx>{}, 1.0), InvalidArgument);
    const cplx off[1] = {cplx(2.0, 0.0)};
    CHECK_THROWS_AS(kernel_envelope_fit(spec, g, off, 1.0), InvalidArgument);
    CHECK_THROWS_AS(kernel_envelope_fit(SymbolSpec::make(SymbolKind::FractionalLaplacian, 2, 0.8), g, zs, 1.0),
                    InvalidArgument);
}

TEST_CASE("adjoint consistency and the imaginary-part identity")
{
    const TorusGrid g(1, 32, 6.0);
    const auto spec = SymbolSpec::make(SymbolKind::DiracMassive, 1);
    const cplx z(0.2, 0.5);
    const ResolventHandle r(spec, g, z), rbar(spec, g, std::conj(z));
    const GridFunction f = testing::random_function(g, 2, 1), u = testing::random_function(g, 2, 2);
    const cplx lhs = u.values.dot(resolvent_apply(r, f).values);
    const cplx rhs = resolvent_apply(rbar, u).values.dot(f.values);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));

    const Matrix a = dense_multiplier(r.table());
    const Matrix b = dense_multiplier(rbar.table());
    const Matrix im_part = (a - a.adjoint()) / cplx(0.0, 2.0);
    CHECK((im_part - z.imag() * a * b).norm() < 1e-10 * im_part.norm());
}

TEST_CASE("dual map")
{
    const TorusGrid g(1, 16, 4.0);
    const GridFunction v = testing::random_function(g, 1, 4);
    for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
        const GridFunction x = dual_map(v, p);
        const double ps = p == 1.0 ? kInf : (std::isinf(p) ? 1.0 : p / (p - 1.0));
        CHECK(lp_norm(x, p) == doctest::Approx(1.0).epsilon(1e-12));
        const double pairing = g.cell_volume() * x.values.dot(v.values).real();
        CHECK(pairing == doctest::Approx(lp_norm(v, ps)).epsilon(1e-12));
    }
    // p = 1 picks the first maximal site
    GridFunction tie(g, 1);
    tie(3, 0) = 2.0;
    tie(9, 0) = -2.0;
    const GridFunction spike = dual_map(tie, 1.0);
    CHECK(std::abs(spike(3, 0)) > 0.0);
    CHECK(spike(9, 0) == cplx(0.0, 0.0));
}

TEST_CASE("Boyd iteration: L2 norm of the resolvent is the multiplier sup")
{
    const TorusGrid g(1, 64, 10.0);
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    const cplx z(0.9, 0.05);
    const ResolventHandle h(spec, g, z);
    double exact = 0.0;
    for (long k = 0; k < g.sites(); ++k)
        exact = std::max(exact, std::abs(h.table().raw()[k]));
    const NormEstimate est = empirical_opnorm(resolvent_operator(h), 2.0, 2.0, 500, 1);
    CHECK(est.estimate == doctest::Approx(exact).epsilon(1e-8));
    for (std::size_t i = 1; i < est.trace.size(); ++i)
        CHECK(est.trace[i] >= est.trace[i - 1]);
}

TEST_CASE("Boyd iteration: identity and rank one")
{
    const TorusGrid g(1, 32, 8.0);
    const double w = g.cell_volume();
    const auto id = multiplier_operator(MultiplierTable::identity(g, 1));
    for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{1.5, 3.0}, std::pair{2.0, kInf}}) {
        const double spike = std::pow(w, (std::isinf(q) ? 0.0 : 1.0 / q) - 1.0 / p);
        const NormEstimate est = empirical_opnorm(id, p, q, 200, 2);
        CHECK(est.estimate == doctest::Approx(spike).epsilon(1e-8));
    }

    const GridFunction uvec = testing::random_function(g, 1, 10), vvec = testing::random_function(g, 1, 11);
    LinearOperator rank1{g, 1,
                         [&](const GridFunction& f) {
                             const cplx c = w * vvec.values.dot(f.values);
                             return GridFunction(g, 1, c * uvec.values);
                         },
                         [&](const GridFunction& f) {
                             const cplx c = w * uvec.values.dot(f.values);
                             return GridFunction(g, 1, c * vvec.values);
                         }};
    for (auto [p, q] : {std::pair{1.5, 3.0}, std::pair{2.0, 2.0}, std::pair{1.2, 6.0}}) {
        const double ps = p / (p - 1.0);
        const NormEstimate est = empirical_opnorm(rank1, p, q, 200, 3);
        CHECK(est.estimate == doctest::Approx(lp_norm(uvec, q) * lp_norm(vvec, ps)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(empirical_opnorm(id, 3.0, 4.0, 10, 1), InvalidArgument);
}

TEST_CASE("sum space norm against random splits")
{
    const TorusGrid g(1, 128, 16.0);
    GridFunction f(g, 1);
    for (long x = 0; x < g.sites(); ++x) {
        const double r = std::abs(g.position(x)[0]);
        f(x, 0) = cplx(1.0 / std::sqrt(r + 0.05), 0.3);
    }
    const double a = 1.5, b = 4.0;
    const double ours = sum_space_norm(f, a, b);
    CHECK(ours <= std::min(lp_norm(f, a), lp_norm(f, b)) + 1e-12);

    // oracle: 50 random splits, each a random threshold with a random blend
    // of the indicator and shrink families
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double peak = 0.0;
    for (long x = 0; x < g.sites(); ++x)
        peak = std::max(peak, f.site_norm(x));
    double best = kInf;
    for (int trial = 0; trial < 50; ++trial) {
        const double tau = peak * unit(rng);
        const double blend = unit(rng);
        GridFunction g1(g, 1), g2(g, 1);
        for (long x = 0; x < g.sites(); ++x) {
            const double m = f.site_norm(x);
            const double frac = m > tau ? blend + (1.0 - blend) * (m - tau) / m : 0.0;
            g1(x, 0) = frac * f(x, 0);
            g2(x, 0) = (1.0 - frac) * f(x, 0);
        }
        best = std::min(best, lp_norm(g1, a) + lp_norm(g2, b));
    }
    CHECK(ours <= best + 1e-12);
    CHECK(best <= 1.05 * ours);
    CHECK(intersection_norm(f, a, b) == std::max(lp_norm(f, a), lp_norm(f, b)));
}
