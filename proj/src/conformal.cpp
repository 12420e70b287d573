#include "nsa/conformal.hpp"

#include <cmath>

#include "nsa/error.hpp"

namespace nsa {

namespace {

void require_disk(cplx w, const char* what)
{
    if (!(std::abs(w) < 1.0))
        throw InvalidArgument(std::string(what) + " must lie in the open unit disk");
}

cplx cayley(cplx u)
{
    return (u - kI) / (u + kI);
}

cplx cayley_inverse(cplx w)
{
    return kI * (1.0 + w) / (1.0 - w);
}

}  // namespace

cplx slit_sqrt(cplx z)
{
    double a = std::arg(z);  // (-pi, pi]
    if (a <= 0.0)
        a += 2.0 * kPi;
    return std::polar(std::sqrt(std::abs(z)), 0.5 * a);
}

cplx nu_map(cplx w, cplx t)
{
    require_disk(w, "nu argument");
    require_disk(t, "normalization point");
    return (w + t) / (1.0 + std::conj(t) * w);
}

cplx nu_inverse(cplx w, cplx t)
{
    require_disk(w, "nu argument");
    require_disk(t, "normalization point");
    return (w - t) / (1.0 - std::conj(t) * w);
}

// ---------------------------------------------------------------------------

ConformalAtlas::ConformalAtlas(SymbolKind kind, cplx z0, Chart chart) : kind_(kind), chart_(chart), z0_(z0)
{
    if (kind == SymbolKind::Radial)
        throw InvalidArgument("no explicit atlas for a radial symbol");
    if (!in_domain(z0))
        throw InvalidArgument("normalization point must lie in the chart's part of the resolvent set");
    z0_tilde_ = psi0(z0);
}

bool ConformalAtlas::in_domain(cplx z) const
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        return false;
    switch (kind_) {
    case SymbolKind::DiracMassless: return chart_ == Chart::Upper ? z.imag() > 0.0 : z.imag() < 0.0;
    case SymbolKind::DiracMassive: return !(z.imag() == 0.0 && std::abs(z.real()) >= 1.0);
    default: return !(z.imag() == 0.0 && z.real() >= 0.0);
    }
}

double ConformalAtlas::dist_sigma(cplx z) const
{
    switch (kind_) {
    case SymbolKind::DiracMassless: return std::abs(z.imag());
    case SymbolKind::DiracMassive: return essential_spectrum(SymbolSpec::make(kind_, 1)).distance(z);
    default: return essential_spectrum(SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.0)).distance(z);
    }
}

cplx ConformalAtlas::psi0(cplx z) const
{
    if (!in_domain(z))
        throw InvalidArgument("point lies on the spectrum or outside the chart");
    switch (kind_) {
    case SymbolKind::DiracMassless: return chart_ == Chart::Upper ? cayley(z) : (z + kI) / (z - kI);
    case SymbolKind::DiracMassive: return cayley(slit_sqrt((z - 1.0) / (z + 1.0)));
    default: return cayley(slit_sqrt(z));
    }
}

cplx ConformalAtlas::psi0_inverse(cplx w) const
{
    require_disk(w, "disk point");
    switch (kind_) {
    case SymbolKind::DiracMassless: return chart_ == Chart::Upper ? cayley_inverse(w) : -kI * (1.0 + w) / (1.0 - w);
    case SymbolKind::DiracMassive: {
        const cplx u = cayley_inverse(w);
        const cplx zeta = u * u;
        return (1.0 + zeta) / (1.0 - zeta);
    }
    default: {
        const cplx u = cayley_inverse(w);
        return u * u;
    }
    }
}

cplx ConformalAtlas::psi(cplx z) const
{
    return nu_inverse(psi0(z), z0_tilde_);
}

cplx ConformalAtlas::psi_inverse(cplx w) const
{
    return psi0_inverse(nu_map(w, z0_tilde_));
}

cplx ConformalAtlas::psi_boundary(double lambda) const
{
    cplx u;
    switch (kind_) {
    case SymbolKind::DiracMassless:
        return chart_ == Chart::Upper ? cayley(cplx(lambda, 0.0)) : (lambda + kI) / (lambda - kI);
    case SymbolKind::DiracMassive:
        if (std::abs(lambda) < 1.0)
            throw InvalidArgument("point of the gap is not on the boundary");
        if (lambda == -1.0)
            return (1.0 - z0_tilde_) / (1.0 - std::conj(z0_tilde_));
        u = std::sqrt((lambda - 1.0) / (lambda + 1.0));
        break;
    default:
        if (lambda < 0.0)
            throw InvalidArgument("negative point is not on the boundary");
        u = std::sqrt(lambda);
        break;
    }
    const cplx w = cayley(u);
    return (w - z0_tilde_) / (1.0 - std::conj(z0_tilde_) * w);
}

// ---------------------------------------------------------------------------

cplx psi_derivative(const ConformalAtlas& atlas, cplx z)
{
    const double dist = atlas.dist_sigma(z);
    const double step = 1e-6 * std::max(std::abs(z), 1e-3);
    if (dist > 2.0 * step)
        return (atlas.psi(z + step) - atlas.psi(z - step)) / (2.0 * step);
    // step along the normal pointing away from the spectrum
    cplx e = z.imag() >= 0.0 ? kI : -kI;
    if (atlas.kind() == SymbolKind::DiracMassive && z.imag() == 0.0)
        e = 1.0;
    const double h = std::min(step, 0.25 * dist);
    const cplx f0 = atlas.psi(z);
    const cplx f1 = atlas.psi(z + h * e);
    const cplx f2 = atlas.psi(z + 2.0 * h * e);
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h * e);
}

double koebe_ratio(const ConformalAtlas& atlas, cplx z)
{
    const double dist = atlas.dist_sigma(z);
    if (dist < 1e-8)
        throw InvalidArgument("point within 1e-8 of the spectrum");
    if (z == atlas.z0())
        throw InvalidArgument("Koebe ratio is evaluated away from the normalization point");
    const double one_minus = 1.0 - std::abs(atlas.psi(z));
    return one_minus / (std::abs(psi_derivative(atlas, z)) * dist);
}

std::array<double, 3> massive_dirac_distortion(const ConformalAtlas& atlas, cplx z)
{
    if (atlas.kind() != SymbolKind::DiracMassive)
        throw InvalidArgument("distortion quotients are defined for the massive Dirac atlas");
    const cplx t = atlas.z0_tilde();
    auto pre = [t](cplx v) { return (v - t) / (1.0 - std::conj(t) * v); };
    const cplx w = atlas.psi(z);
    const cplx w1 = pre(1.0), w2 = pre(-1.0), w3 = pre(kI), w4 = pre(-kI);
    const double one_z2 = std::abs(1.0 - z * z);
    const double big = 1.0 + std::abs(z);
    const double dist = atlas.dist_sigma(z);
    return {(1.0 - std::abs(w)) / (std::pow(one_z2, -0.5) / big * dist),
            std::abs(w - w1) * std::abs(w - w2) / (std::sqrt(one_z2) / big),
            std::abs(w - w3) * std::abs(w - w4) / (1.0 / big)};
}

// ---------------------------------------------------------------------------

void WeightSpec::validate() const
{
    if (critical_points.size() != critical_exponents.size())
        throw InvalidArgument("one exponent per exceptional point expected");
    for (double mu : critical_exponents) {
        if (!(mu >= 0.0))
            throw InvalidArgument("weight exponents must be nonnegative");
    }
    if (!(infinity_exponent >= 0.0))
        throw InvalidArgument("weight exponents must be nonnegative");
    if (!(eps > 0.0))
        throw InvalidArgument("weight needs eps > 0");
    auto on_circle = [](cplx w) { return std::abs(std::abs(w) - 1.0) < 1e-10; };
    for (cplx w : critical_points) {
        if (!on_circle(w))
            throw InvalidArgument("exceptional points lie on the unit circle");
    }
    for (cplx w : infinity_points) {
        if (!on_circle(w))
            throw InvalidArgument("exceptional points lie on the unit circle");
    }
}

WeightSpec weight_points(const ConformalAtlas& atlas)
{
    WeightSpec w;
    const SymbolSpec spec = atlas.kind() == SymbolKind::DiracMassless || atlas.kind() == SymbolKind::DiracMassive
                                ? SymbolSpec::make(atlas.kind(), 1)
                                : SymbolSpec::make(atlas.kind(), 1, 1.5);
    for (double c : critical_values(spec).values) {
        w.critical_points.push_back(atlas.psi_boundary(c));
        w.critical_exponents.push_back(0.0);
    }
    // psi0(inf) = 1, except for the massive Dirac kind where (z-1)/(z+1)
    // tends to the cut point 1 and sqrt gives +-1, i.e. psi0 -> -+i.
    const cplx t = atlas.z0_tilde();
    auto pre = [t](cplx v) { return (v - t) / (1.0 - std::conj(t) * v); };
    if (atlas.kind() == SymbolKind::DiracMassive) {
        w.infinity_points = {pre(kI), pre(-kI)};
    } else {
        w.infinity_points = {pre(1.0)};
    }
    w.eps = 1e-3;
    return w;
}

double blaschke_sum(const ConformalAtlas& atlas, std::span<const cplx> zs, const WeightSpec& weight)
{
    weight.validate();
    double sum = 0.0;
    for (const cplx z : zs) {
        const cplx w = atlas.psi(z);
        double term = 1.0 - std::abs(w);
        for (std::size_t i = 0; i < weight.critical_points.size(); ++i) {
            const double e = std::max(0.0, weight.critical_exponents[i] - 1.0 + weight.eps);
            term *= std::pow(std::abs(w - weight.critical_points[i]), e);
        }
        for (const cplx wi : weight.infinity_points) {
            const double e = std::max(0.0, weight.infinity_exponent - 1.0 + weight.eps);
            term *= std::pow(std::abs(w - wi), e);
        }
        sum += term;
    }
    return sum;
}

double sum_weight(SumWeight kind, const SymbolSpec& spec, cplx z, const SumWeightParams& p)
{
    const double dist = dist_to_spectrum(spec, z);
    if (!(dist > 0.0))
        throw InvalidArgument("weight is undefined on the spectrum");
    const double az = std::abs(z);
    const double big = 1.0 + az;
    const double d = p.d;
    const double curv = p.alpha * (d - 1.0) / (d + 1.0);
    switch (kind) {
    case SumWeight::Distance: return dist;
    case SumWeight::Fractional: return std::pow(az, -(1.0 - p.eps) / 2.0) * dist;
    case SumWeight::MasslessDirac: return dist * std::pow(big, -curv - 1.0 - p.eps);
    case SumWeight::MassiveDirac:
        return dist * std::pow(std::abs(z * z - 1.0), p.alpha / 2.0 - 1.0 + p.eps)
               * std::pow(big, -p.alpha - curv + 1.0 - p.eps);
    case SumWeight::Relativistic:
        return dist * std::pow(az, p.alpha / 2.0 - 1.0 + p.eps)
               * std::pow(big, -2.0 * curv + 0.5 - p.alpha / 2.0 - p.eps);
    }
    return 0.0;
}

double weighted_blaschke_sum(std::span<const SpectralPoint> points, SumWeight kind, const SymbolSpec& spec,
                             const SumWeightParams& p)
{
    // pairwise summation keeps the order of additions fixed
    std::vector<double> terms;
    terms.reserve(points.size());
    for (const auto& pt : points) {
        if (pt.label != SpectralLabel::Discrete)
            throw InvalidArgument("weighted sums run over Discrete points only");
        terms.push_back(sum_weight(kind, spec, pt.z, p));
    }
    while (terms.size() > 1) {
        std::vector<double> next;
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2)
            next.push_back(terms[i] + terms[i + 1]);
        if (terms.size() % 2 == 1)
            next.push_back(terms.back());
        terms = std::move(next);
    }
    return terms.empty() ? 0.0 : terms[0];
}

}  // namespace nsa
