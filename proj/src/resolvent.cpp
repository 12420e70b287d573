#include "nsa/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nsa/error.hpp"

namespace nsa {

std::vector<double> lattice_levels(const SymbolSpec& spec, const TorusGrid& grid)
{
    std::vector<double> levels;
    levels.reserve(grid.sites() * spec.n);
    for (long k = 0; k < grid.sites(); ++k) {
        const double lam = scalar_symbol(spec, grid.frequency_norm(k));
        levels.push_back(lam);
        if (is_dirac(spec.kind))
            levels.push_back(-lam);
    }
    std::sort(levels.begin(), levels.end());
    double scale = 1.0;
    for (double v : levels)
        scale = std::max(scale, std::abs(v));
    std::vector<double> distinct;
    for (double v : levels) {
        if (distinct.empty() || v - distinct.back() > 1e-12 * scale)
            distinct.push_back(v);
    }
    return distinct;
}

double level_spacing(const std::vector<double>& levels, const EssentialSpectrum& sigma, double lambda)
{
    if (levels.size() < 2)
        throw InvalidArgument("need at least two lattice levels for a spacing");
    const double x = sigma.nearest(cplx(lambda, 0.0));
    auto it = std::upper_bound(levels.begin(), levels.end(), x);
    if (it == levels.begin())
        return levels[1] - levels[0];
    if (it == levels.end())
        return levels.back() - levels[levels.size() - 2];
    const double above = *it - *(it - 1);
    // a point sitting at a spectral edge only sees the level pair inside sigma(H0)
    if (!sigma.contains(0.5 * (*it + *(it - 1)))) {
        if (it + 1 != levels.end() && sigma.contains(*it))
            return *(it + 1) - *it;
        if (it - 1 != levels.begin())
            return *(it - 1) - *(it - 2);
    }
    return above;
}

// ---------------------------------------------------------------------------

ResolventHandle::ResolventHandle(SymbolSpec spec, TorusGrid grid, cplx z)
    : spec_(std::move(spec)), grid_(grid), z_(z), symbol_(symbol_table(spec_, grid_)),
      table_(grid_, spec_.n)
{
    const int n = spec_.n;
    double scale = 0.0;
    double best = kInf;
    long best_mode = -1;
    for (long k = 0; k < grid_.sites(); ++k) {
        const double lam = scalar_symbol(spec_, grid_.frequency_norm(k));
        scale = std::max(scale, std::abs(lam));
        double dist = std::abs(lam - z_);
        if (is_dirac(spec_.kind))
            dist = std::min(dist, std::abs(-lam - z_));
        if (dist < best) {
            best = dist;
            best_mode = k;
        }
    }
    lattice_distance_ = best;
    if (best <= 1e-12 * std::max(scale, 1.0)) {
        throw ResolventError("spectral parameter (" + std::to_string(z_.real()) + ", " + std::to_string(z_.imag())
                                 + ") sits on the lattice level of mode " + std::to_string(best_mode),
                             best_mode);
    }
    if (n == 1) {
        for (long k = 0; k < grid_.sites(); ++k)
            table_.raw()[k] = 1.0 / (symbol_.raw()[k] - z_);
        return;
    }
    const Matrix id = Matrix::Identity(n, n);
    for (long k = 0; k < grid_.sites(); ++k)
        table_.set(k, (symbol_.at(k) - z_ * id).inverse());
}

GridFunction resolvent_apply(const ResolventHandle& h, const GridFunction& f)
{
    return apply_multiplier(h.table(), f);
}

MultiplierTable dirac_factorized_table(const SymbolSpec& spec, const TorusGrid& grid, cplx z)
{
    if (!is_dirac(spec.kind))
        throw InvalidArgument("the factorized resolvent exists for the Dirac kinds only");
    const double mass2 = spec.kind == SymbolKind::DiracMassive ? 1.0 : 0.0;
    const MultiplierTable symbol = symbol_table(spec, grid);
    MultiplierTable out(grid, spec.n);
    for (long k = 0; k < grid.sites(); ++k) {
        const double r = grid.frequency_norm(k);
        const cplx klein_gordon = 1.0 / (r * r + mass2 - z * z);
        out.set(k, klein_gordon * (symbol.at(k) + z * Matrix::Identity(spec.n, spec.n)));
    }
    return out;
}

GridFunction dirac_factorized_apply(const SymbolSpec& spec, const TorusGrid& grid, cplx z, const GridFunction& f)
{
    return apply_multiplier(dirac_factorized_table(spec, grid, z), f);
}

// ---------------------------------------------------------------------------

Vector resolvent_kernel_full(const ResolventHandle& h)
{
    return multiplier_kernel(h.table());
}

KernelSample resolvent_kernel(const ResolventHandle& h)
{
    const auto& grid = h.grid();
    const int n = h.spec().n;
    const Vector kernel = resolvent_kernel_full(h);
    KernelSample out;
    const double step = grid.spacing() * std::sqrt(static_cast<double>(grid.dim()));
    for (int m = 1; m * step <= 0.5 * grid.length() + 1e-12 * grid.length(); ++m) {
        std::array<int, 3> idx{0, 0, 0};
        for (int j = 0; j < grid.dim(); ++j)
            idx[j] = m % grid.points();
        const long flat = grid.flat_index(idx);
        out.radii.push_back(m * step);
        out.values.push_back(Eigen::Map<const Matrix>(kernel.data() + flat * n * n, n, n));
    }
    return out;
}

EnvelopeFit kernel_envelope_fit(const SymbolSpec& spec, const TorusGrid& grid, std::span<const cplx> z_set,
                                double radius)
{
    if (z_set.empty())
        throw InvalidArgument("envelope fit needs at least one spectral parameter");
    const double d = spec.d;
    if (!(spec.s > 0.5 * d && spec.s < d))
        throw InvalidArgument("envelope fit needs d/2 < s < d");
    const int n = spec.n;
    // Both scalar kinds behave like |xi|^s at high frequency.  Their kernels
    // are the Riesz kernel c r^{s-d} plus the lattice sum of the remainder
    // 1/(T - z) - |xi|^{-s}, which is resolved at grid scale.
    const bool subtract = spec.kind == SymbolKind::FractionalLaplacian || spec.kind == SymbolKind::Relativistic;
    const double riesz = std::pow(kPi, spec.s - 0.5 * d) * std::tgamma(0.5 * (d - spec.s)) / std::tgamma(0.5 * spec.s);
    EnvelopeFit fit;
    for (const cplx z : z_set) {
        if (std::abs(std::abs(z) - 1.0) > 1e-12)
            throw InvalidArgument("envelope fit samples z on the unit circle");
        Vector kernel;
        if (subtract) {
            const auto rest = MultiplierTable::from_radial(grid, [&](double r) {
                const cplx full = 1.0 / (scalar_symbol(spec, r) - z);
                return r == 0.0 ? full : full - std::pow(r, -spec.s);
            });
            kernel = multiplier_kernel(rest);
            // |R0(r; z)| r^{d-s} tends to the Riesz constant as r -> 0
            if (riesz > fit.constant) {
                fit.constant = riesz;
                fit.z_at = z;
                fit.r_at = 0.0;
            }
        } else {
            kernel = resolvent_kernel_full(ResolventHandle(spec, grid, z));
        }
        for (long x = 1; x < grid.sites(); ++x) {
            const double r = grid.periodic_radius(x);
            if (r > radius)
                continue;
            double size;
            if (subtract) {
                size = std::abs(kernel[x] + riesz * std::pow(r, spec.s - d));
            } else if (n == 1) {
                size = std::abs(kernel[x]);
            } else {
                Eigen::JacobiSVD<Matrix> svd(Eigen::Map<const Matrix>(kernel.data() + x * n * n, n, n));
                size = svd.singularValues()(0);
            }
            const double value = size * std::pow(r, d - spec.s);
            if (value > fit.constant) {
                fit.constant = value;
                fit.z_at = z;
                fit.r_at = r;
            }
        }
    }
    return fit;
}

// ---------------------------------------------------------------------------

LinearOperator multiplier_operator(const MultiplierTable& m)
{
    MultiplierTable adj = m.adjoint();
    return LinearOperator{
        m.grid(), m.components(),
        [m](const GridFunction& f) { return apply_multiplier(m, f); },
        [adj = std::move(adj)](const GridFunction& f) { return apply_multiplier(adj, f); }};
}

LinearOperator resolvent_operator(const ResolventHandle& h)
{
    return multiplier_operator(h.table());
}

namespace {

double conjugate_exponent(double p)
{
    if (p == 1.0)
        return kInf;
    if (std::isinf(p))
        return 1.0;
    return p / (p - 1.0);
}

// Re <a, b> = Re h^d sum a conj(b)
double pairing(const GridFunction& a, const GridFunction& b)
{
    return a.grid.cell_volume() * b.values.dot(a.values).real();
}

}  // namespace

GridFunction dual_map(const GridFunction& v, double p)
{
    if (!(p >= 1.0))
        throw InvalidArgument("dual map needs p >= 1");
    const auto& grid = v.grid;
    const int n = v.components;
    const double w = grid.cell_volume();
    GridFunction out(grid, n);
    if (p == 1.0) {
        long best = 0;
        double best_norm = -1.0;
        for (long x = 0; x < grid.sites(); ++x) {
            const double a = v.site_norm(x);
            if (a > best_norm) {
                best_norm = a;
                best = x;
            }
        }
        if (best_norm == 0.0) {
            out(0, 0) = 1.0 / w;
            return out;
        }
        out.values.segment(best * n, n) = v.values.segment(best * n, n) / (best_norm * w);
        return out;
    }
    if (std::isinf(p)) {
        for (long x = 0; x < grid.sites(); ++x) {
            const double a = v.site_norm(x);
            if (a > 0.0)
                out.values.segment(x * n, n) = v.values.segment(x * n, n) / a;
        }
        return out;
    }
    const double ps = conjugate_exponent(p);
    const double norm = lp_norm(v, ps);
    if (norm == 0.0) {
        out.values.setConstant(std::pow(grid.length(), -grid.dim() / p) / std::sqrt(static_cast<double>(n)));
        return out;
    }
    for (long x = 0; x < grid.sites(); ++x) {
        const double a = v.site_norm(x);
        if (a > 0.0) {
            const double mag = std::pow(a / norm, ps - 1.0);
            out.values.segment(x * n, n) = v.values.segment(x * n, n) * (mag / a);
        }
    }
    return out;
}

NormEstimate empirical_opnorm(const LinearOperator& op, double p, double q, int iters, std::uint64_t seed)
{
    if (!(p >= 1.0 && p <= 2.0 && q >= 2.0))
        throw InvalidArgument("Boyd iteration needs 1 <= p <= 2 <= p'");
    if (iters < 1)
        throw InvalidArgument("need at least one iteration");
    const auto& grid = op.grid;
    const int n = op.components;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    GridFunction x(grid, n);
    for (Eigen::Index i = 0; i < x.values.size(); ++i)
        x.values[i] = cplx(normal(rng), normal(rng));
    x.values /= lp_norm(x, p);

    const double qs = conjugate_exponent(q);
    const double ps = conjugate_exponent(p);
    NormEstimate out;
    for (int it = 0; it < iters; ++it) {
        const GridFunction y = op.apply(x);
        const double est = lp_norm(y, q);
        out.estimate = std::max(out.estimate, est);
        out.trace.push_back(out.estimate);
        out.iterations = it + 1;

        const GridFunction u = dual_map(y, qs);
        const GridFunction zv = op.adjoint(u);
        const double zn = lp_norm(zv, ps);
        const double zx = pairing(zv, x);
        if (zn <= zx * (1.0 + 1e-13) || zn == 0.0) {
            out.converged = true;
            break;
        }
        GridFunction next = dual_map(zv, p);
        const double change = (next.values - x.values).norm() / std::max(x.values.norm(), 1e-300);
        x = std::move(next);
        if (change < 1e-14) {
            out.converged = true;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

double intersection_norm(const GridFunction& f, double a, double b)
{
    return std::max(lp_norm(f, a), lp_norm(f, b));
}

double sum_space_norm(const GridFunction& g, double a, double b)
{
    if (!(a >= 1.0 && b >= a))
        throw InvalidArgument("sum space needs 1 <= a <= b");
    const auto& grid = g.grid;
    const int n = g.components;
    std::vector<double> mags(grid.sites());
    for (long x = 0; x < grid.sites(); ++x)
        mags[x] = g.site_norm(x);
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());

    auto split_cost = [&](double tau, bool shrink) {
        GridFunction g1(grid, n), g2(grid, n);
        for (long x = 0; x < grid.sites(); ++x) {
            const double m = mags[x];
            if (m <= tau || m == 0.0) {
                g2.values.segment(x * n, n) = g.values.segment(x * n, n);
                continue;
            }
            const double frac = shrink ? (m - tau) / m : 1.0;
            g1.values.segment(x * n, n) = frac * g.values.segment(x * n, n);
            g2.values.segment(x * n, n) = (1.0 - frac) * g.values.segment(x * n, n);
        }
        return lp_norm(g1, a) + lp_norm(g2, b);
    };

    double best = std::min(lp_norm(g, a), lp_norm(g, b));
    // candidate thresholds: quantiles of |g|
    const int samples = 256;
    std::vector<double> taus;
    for (int i = 0; i <= samples; ++i)
        taus.push_back(sorted[std::min<std::size_t>(sorted.size() - 1, i * (sorted.size() - 1) / samples)]);
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        for (bool shrink : {false, true}) {
            const double c = split_cost(taus[i], shrink);
            if (c < best) {
                best = c;
                best_index = i;
            }
        }
    }
    // golden-section refinement of the shrink split around the best quantile
    double lo = taus[best_index == 0 ? 0 : best_index - 1];
    double hi = taus[std::min(taus.size() - 1, best_index + 1)];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double m1 = hi - phi * (hi - lo);
        const double m2 = lo + phi * (hi - lo);
        const double c1 = split_cost(m1, true);
        const double c2 = split_cost(m2, true);
        best = std::min({best, c1, c2});
        if (c1 < c2)
            hi = m2;
        else
            lo = m1;
    }
    return best;
}

}  // namespace nsa
