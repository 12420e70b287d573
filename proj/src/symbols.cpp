#include "nsa/symbols.hpp"

#include <algorithm>
#include <cmath>

#include "nsa/error.hpp"

namespace nsa {

std::string to_string(SymbolKind kind)
{
    switch (kind) {
    case SymbolKind::FractionalLaplacian: return "fractional-laplacian";
    case SymbolKind::Relativistic: return "relativistic";
    case SymbolKind::DiracMassless: return "dirac-massless";
    case SymbolKind::DiracMassive: return "dirac-massive";
    case SymbolKind::Radial: return "radial";
    }
    return "unknown";
}

SymbolKind symbol_kind_from_string(const std::string& name)
{
    for (auto kind : {SymbolKind::FractionalLaplacian, SymbolKind::Relativistic,
                      SymbolKind::DiracMassless, SymbolKind::DiracMassive, SymbolKind::Radial}) {
        if (to_string(kind) == name)
            return kind;
    }
    throw InvalidArgument("unknown operator kind '" + name + "'");
}

bool is_dirac(SymbolKind kind)
{
    return kind == SymbolKind::DiracMassless || kind == SymbolKind::DiracMassive;
}

int spinor_dimension(SymbolKind kind, int d)
{
    if (!is_dirac(kind))
        return 1;
    return d <= 2 ? 2 : 4;
}

void SymbolSpec::validate() const
{
    if (d < 1 || d > 3)
        throw InvalidArgument("dimension must be 1, 2 or 3 (got " + std::to_string(d) + ")");
    if (n != spinor_dimension(kind, d))
        throw InvalidArgument("spinor dimension " + std::to_string(n) + " does not match kind "
                              + to_string(kind));
    if (is_dirac(kind)) {
        if (s != 1.0)
            throw InvalidArgument("Dirac kinds have order s = 1");
        return;
    }
    if (kind == SymbolKind::Radial) {
        if (!radial)
            throw InvalidArgument("radial kind needs a symbol function");
        if (!(s > 0.0))
            throw InvalidArgument("radial symbol needs a positive nominal order");
        return;
    }
    // One-dimensional runs need s >= d for the potential regime to be
    // non-empty, so d = 1 admits 0 < s <= 2.
    const double upper = d == 1 ? 2.0 : static_cast<double>(d);
    const bool ok = d == 1 ? (s > 0.0 && s <= upper) : (s > 0.0 && s < upper);
    if (!ok)
        throw InvalidArgument("order s = " + std::to_string(s) + " outside the admissible range for d = "
                              + std::to_string(d));
}

SymbolSpec SymbolSpec::make(SymbolKind kind, int d, double s)
{
    SymbolSpec spec;
    spec.kind = kind;
    spec.d = d;
    spec.s = s;
    spec.n = spinor_dimension(kind, d);
    spec.validate();
    return spec;
}

SymbolSpec SymbolSpec::make_radial(int d, double nominal_order, std::function<double(double)> radial)
{
    SymbolSpec spec;
    spec.kind = SymbolKind::Radial;
    spec.d = d;
    spec.s = nominal_order;
    spec.n = 1;
    spec.radial = std::move(radial);
    spec.validate();
    return spec;
}

double scalar_symbol(const SymbolSpec& spec, double r)
{
    switch (spec.kind) {
    case SymbolKind::FractionalLaplacian: return r == 0.0 ? 0.0 : std::pow(r, spec.s);
    // expm1 form keeps the small-|xi| regime accurate
    case SymbolKind::Relativistic: return std::expm1(0.5 * spec.s * std::log1p(r * r));
    case SymbolKind::DiracMassless: return r;
    case SymbolKind::DiracMassive: return std::sqrt(1.0 + r * r);
    case SymbolKind::Radial: return spec.radial(r);
    }
    return 0.0;
}

namespace {

double norm_of(std::span<const double> xi)
{
    double sum = 0.0;
    for (double x : xi)
        sum += x * x;
    return std::sqrt(sum);
}

}  // namespace

Matrix eval_symbol(const SymbolSpec& spec, std::span<const double> xi)
{
    if (static_cast<int>(xi.size()) != spec.d)
        throw InvalidArgument("frequency has wrong dimension");
    if (!is_dirac(spec.kind)) {
        Matrix m(1, 1);
        m(0, 0) = scalar_symbol(spec, norm_of(xi));
        return m;
    }
    // Generators are rebuilt per call; hot paths go through symbol tables.
    const CliffordSet gens = clifford_generators(spec.d);
    Matrix m = Matrix::Zero(spec.n, spec.n);
    for (int j = 0; j < spec.d; ++j)
        m += xi[j] * gens.alpha[j];
    if (spec.kind == SymbolKind::DiracMassive)
        m += gens.beta;
    return m;
}

std::vector<double> symbol_eigenvalues(const SymbolSpec& spec, std::span<const double> xi)
{
    const double r = norm_of(xi);
    const double lam = scalar_symbol(spec, r);
    if (!is_dirac(spec.kind))
        return {lam};
    std::vector<double> out;
    out.reserve(spec.n);
    for (int i = 0; i < spec.n / 2; ++i)
        out.push_back(-lam);
    for (int i = 0; i < spec.n / 2; ++i)
        out.push_back(lam);
    return out;
}

CriticalSet critical_values(const SymbolSpec& spec)
{
    switch (spec.kind) {
    case SymbolKind::FractionalLaplacian:
        if (spec.s > 1.0)
            return {{0.0}};
        return {};
    case SymbolKind::Relativistic: return {{0.0}};
    case SymbolKind::DiracMassless: return {};
    case SymbolKind::DiracMassive: return {{1.0, -1.0}};
    case SymbolKind::Radial: return {};
    }
    return {};
}

bool EssentialSpectrum::contains(double x) const
{
    return std::any_of(intervals.begin(), intervals.end(),
                       [x](const Interval& iv) { return x >= iv.lo && x <= iv.hi; });
}

double EssentialSpectrum::nearest(cplx z) const
{
    double best = 0.0;
    double best_dist = kInf;
    for (const auto& iv : intervals) {
        const double x = std::clamp(z.real(), iv.lo, iv.hi);
        const double dist = std::abs(z - cplx(x, 0.0));
        if (dist < best_dist) {
            best_dist = dist;
            best = x;
        }
    }
    return best;
}

double EssentialSpectrum::distance(cplx z) const
{
    return std::abs(z - cplx(nearest(z), 0.0));
}

EssentialSpectrum essential_spectrum(const SymbolSpec& spec)
{
    switch (spec.kind) {
    case SymbolKind::FractionalLaplacian:
    case SymbolKind::Relativistic: return {{{0.0, kInf}}};
    case SymbolKind::DiracMassless: return {{{-kInf, kInf}}};
    case SymbolKind::DiracMassive: return {{{-kInf, -1.0}, {1.0, kInf}}};
    case SymbolKind::Radial: return {{{spec.radial(0.0), kInf}}};
    }
    return {};
}

CliffordSet clifford_generators(int d)
{
    const cplx i = kI;
    Matrix sx(2, 2), sy(2, 2), sz(2, 2), id2 = Matrix::Identity(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, -i, i, 0;
    sz << 1, 0, 0, -1;

    CliffordSet out;
    switch (d) {
    case 1:
        out.alpha = {sx};
        out.beta = sz;
        break;
    case 2:
        out.alpha = {sx, sy};
        out.beta = sz;
        break;
    case 3: {
        // standard Dirac representation
        auto off = [](const Matrix& s) {
            Matrix m = Matrix::Zero(4, 4);
            m.block(0, 2, 2, 2) = s;
            m.block(2, 0, 2, 2) = s;
            return m;
        };
        out.alpha = {off(sx), off(sy), off(sz)};
        out.beta = Matrix::Zero(4, 4);
        out.beta.block(0, 0, 2, 2) = id2;
        out.beta.block(2, 2, 2, 2) = -id2;
        break;
    }
    default: throw InvalidArgument("Clifford generators exist for d = 1, 2, 3 only");
    }
    return out;
}

}  // namespace nsa
