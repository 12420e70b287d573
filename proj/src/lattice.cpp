#include "nsa/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "nsa/error.hpp"

namespace nsa {

int default_point_cap(int d)
{
    switch (d) {
    case 1: return 4096;
    case 2: return 64;
    case 3: return 16;
    default: return 0;
    }
}

// ---------------------------------------------------------------------------
// TorusGrid

TorusGrid::TorusGrid(int d, int points, double length, long site_cap)
    : d_(d), points_(points), length_(length), sites_(1), site_cap_(site_cap)
{
    if (d < 1 || d > 3)
        throw InvalidArgument("grid dimension must be 1, 2 or 3");
    if (points < 8 || points % 2 != 0)
        throw InvalidArgument("points per axis must be even and >= 8 (got " + std::to_string(points) + ")");
    // An explicit site cap replaces the per-axis defaults.
    if (site_cap == kDefaultSiteCap && points > default_point_cap(d))
        throw SizeCapExceeded("points per axis " + std::to_string(points) + " exceeds the cap "
                              + std::to_string(default_point_cap(d)) + " for d = " + std::to_string(d));
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidArgument("side length must be positive");
    for (int j = 0; j < d; ++j)
        sites_ *= points;
    if (sites_ > site_cap_)
        throw SizeCapExceeded("grid has " + std::to_string(sites_) + " sites, cap is "
                              + std::to_string(site_cap_));
}

double TorusGrid::cell_volume() const noexcept
{
    return std::pow(spacing(), d_);
}

void TorusGrid::require_components(int components) const
{
    if (sites_ * components > site_cap_)
        throw SizeCapExceeded("grid with " + std::to_string(components) + " components has "
                              + std::to_string(sites_ * components) + " unknowns, cap is "
                              + std::to_string(site_cap_));
}

std::array<int, 3> TorusGrid::multi_index(long flat) const
{
    std::array<int, 3> idx{0, 0, 0};
    for (int j = d_ - 1; j >= 0; --j) {
        idx[j] = static_cast<int>(flat % points_);
        flat /= points_;
    }
    return idx;
}

long TorusGrid::flat_index(const std::array<int, 3>& idx) const
{
    long flat = 0;
    for (int j = 0; j < d_; ++j)
        flat = flat * points_ + idx[j];
    return flat;
}

std::vector<double> TorusGrid::position(long site) const
{
    const auto idx = multi_index(site);
    std::vector<double> x(d_);
    for (int j = 0; j < d_; ++j)
        x[j] = (idx[j] - points_ / 2) * spacing();
    return x;
}

std::vector<double> TorusGrid::frequency(long mode) const
{
    const auto idx = multi_index(mode);
    std::vector<double> xi(d_);
    for (int j = 0; j < d_; ++j)
        xi[j] = frequency_index(idx[j]) / length_;
    return xi;
}

double TorusGrid::frequency_norm(long mode) const
{
    const auto idx = multi_index(mode);
    double sum = 0.0;
    for (int j = 0; j < d_; ++j) {
        const double k = frequency_index(idx[j]);
        sum += k * k;
    }
    return std::sqrt(sum) / length_;
}

long TorusGrid::difference(long x, long y) const
{
    const auto a = multi_index(x);
    const auto b = multi_index(y);
    std::array<int, 3> diff{0, 0, 0};
    for (int j = 0; j < d_; ++j)
        diff[j] = ((a[j] - b[j]) % points_ + points_) % points_;
    return flat_index(diff);
}

double TorusGrid::periodic_radius(long flat) const
{
    const auto idx = multi_index(flat);
    double sum = 0.0;
    for (int j = 0; j < d_; ++j) {
        const double m = frequency_index(idx[j]);
        sum += m * m;
    }
    return std::sqrt(sum) * spacing();
}

TorusGrid TorusGrid::rescaled(double factor) const
{
    return TorusGrid(d_, points_, length_ * factor, site_cap_);
}

TorusGrid TorusGrid::refined(int factor) const
{
    return TorusGrid(d_, points_ * factor, length_, site_cap_);
}

bool TorusGrid::operator==(const TorusGrid& other) const noexcept
{
    return d_ == other.d_ && points_ == other.points_ && length_ == other.length_;
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(TorusGrid g, int n)
    : grid(g), components(n), values(Vector::Zero(g.sites() * n))
{
}

GridFunction::GridFunction(TorusGrid g, int n, Vector v)
    : grid(g), components(n), values(std::move(v))
{
    if (values.size() != grid.sites() * n)
        throw GridMismatch("grid function has " + std::to_string(values.size()) + " values, expected "
                           + std::to_string(grid.sites() * n));
}

double GridFunction::site_norm(long site) const
{
    return values.segment(site * components, components).norm();
}

// ---------------------------------------------------------------------------
// PotentialField

PotentialField::PotentialField(TorusGrid grid, int n)
    : grid_(grid), n_(n), values_(Vector::Zero(grid.sites() * n * n))
{
}

PotentialField::PotentialField(TorusGrid grid, int n, Vector values)
    : grid_(grid), n_(n), values_(std::move(values))
{
    if (values_.size() != grid_.sites() * n_ * n_)
        throw GridMismatch("potential has " + std::to_string(values_.size()) + " values, expected "
                           + std::to_string(grid_.sites() * n_ * n_));
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag()))
            throw InvalidArgument("potential has non-finite entries");
    }
}

PotentialField PotentialField::scalar(TorusGrid grid, Vector values)
{
    return PotentialField(grid, 1, std::move(values));
}

PotentialField PotentialField::purely_imaginary(const PotentialField& w)
{
    const int n = w.components();
    for (long x = 0; x < w.grid().sites(); ++x) {
        const Matrix m = w.at(x);
        const double scale = std::max(1.0, m.norm());
        if ((m - m.adjoint()).norm() > 1e-12 * scale)
            throw InvalidArgument("W must be Hermitian at every site");
        if (n == 1) {
            if (m(0, 0).real() < 0.0)
                throw InvalidArgument("W must be nonnegative (site " + std::to_string(x) + ")");
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
            if (es.eigenvalues().minCoeff() < -1e-12 * scale)
                throw InvalidArgument("W must be positive semidefinite (site " + std::to_string(x) + ")");
        }
    }
    PotentialField v(w.grid(), n, kI * w.values());
    v.certified_imaginary_ = true;
    return v;
}

Matrix PotentialField::at(long site) const
{
    return Eigen::Map<const Matrix>(values_.data() + site * n_ * n_, n_, n_);
}

void PotentialField::set(long site, const Matrix& m)
{
    Eigen::Map<Matrix>(values_.data() + site * n_ * n_, n_, n_) = m;
    certified_imaginary_ = false;
}

PotentialField PotentialField::broadcast(int n) const
{
    if (n_ != 1)
        throw InvalidArgument("only scalar potentials can be broadcast");
    if (n == 1)
        return *this;
    PotentialField out(grid_, n);
    for (long x = 0; x < grid_.sites(); ++x)
        out.set(x, scalar_at(x) * Matrix::Identity(n, n));
    out.certified_imaginary_ = certified_imaginary_;
    return out;
}

PotentialField PotentialField::scaled(cplx t) const
{
    PotentialField out(grid_, n_, t * values_);
    out.certified_imaginary_ = certified_imaginary_ && t.imag() == 0.0 && t.real() >= 0.0;
    return out;
}

double PotentialField::abs_at(long site) const
{
    if (n_ == 1)
        return std::abs(scalar_at(site));
    Eigen::JacobiSVD<Matrix> svd(at(site));
    return svd.singularValues()(0);
}

double PotentialField::max_abs() const
{
    double best = 0.0;
    for (long x = 0; x < grid_.sites(); ++x)
        best = std::max(best, abs_at(x));
    return best;
}

bool PotentialField::is_zero() const
{
    return values_.isZero(0.0);
}

std::vector<long> PotentialField::support() const
{
    std::vector<long> out;
    const long block = static_cast<long>(n_) * n_;
    for (long x = 0; x < grid_.sites(); ++x) {
        if (!values_.segment(x * block, block).isZero(0.0))
            out.push_back(x);
    }
    return out;
}

bool PotentialField::is_imaginary_psd(double tol) const
{
    const double scale = std::max(1.0, max_abs());
    for (long x = 0; x < grid_.sites(); ++x) {
        const Matrix w = -kI * at(x);
        if ((w - w.adjoint()).norm() > tol * scale)
            return false;
        if (n_ == 1) {
            if (w(0, 0).real() < -tol * scale)
                return false;
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (w + w.adjoint()));
            if (es.eigenvalues().minCoeff() < -tol * scale)
                return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// MultiplierTable

MultiplierTable::MultiplierTable(TorusGrid grid, int n)
    : grid_(grid), n_(n), values_(Vector::Zero(grid.sites() * n * n))
{
}

MultiplierTable MultiplierTable::from_function(const TorusGrid& grid, int n,
                                               const std::function<Matrix(std::span<const double>)>& m)
{
    MultiplierTable out(grid, n);
    for (long k = 0; k < grid.sites(); ++k) {
        const auto xi = grid.frequency(k);
        const Matrix value = m(xi);
        if (value.rows() != n || value.cols() != n)
            throw InvalidArgument("multiplier returned a block of the wrong size");
        out.set(k, value);
    }
    return out;
}

MultiplierTable MultiplierTable::from_radial(const TorusGrid& grid, const std::function<cplx(double)>& m)
{
    MultiplierTable out(grid, 1);
    for (long k = 0; k < grid.sites(); ++k)
        out.values_[k] = m(grid.frequency_norm(k));
    return out;
}

MultiplierTable MultiplierTable::identity(const TorusGrid& grid, int n)
{
    MultiplierTable out(grid, n);
    for (long k = 0; k < grid.sites(); ++k)
        out.set(k, Matrix::Identity(n, n));
    return out;
}

Matrix MultiplierTable::at(long mode) const
{
    return Eigen::Map<const Matrix>(values_.data() + mode * n_ * n_, n_, n_);
}

void MultiplierTable::set(long mode, const Matrix& m)
{
    Eigen::Map<Matrix>(values_.data() + mode * n_ * n_, n_, n_) = m;
}

MultiplierTable MultiplierTable::operator*(const MultiplierTable& rhs) const
{
    if (!(grid_ == rhs.grid_) || n_ != rhs.n_)
        throw GridMismatch("multiplier tables live on different grids");
    MultiplierTable out(grid_, n_);
    if (n_ == 1) {
        out.values_ = values_.cwiseProduct(rhs.values_);
        return out;
    }
    for (long k = 0; k < grid_.sites(); ++k)
        out.set(k, at(k) * rhs.at(k));
    return out;
}

MultiplierTable MultiplierTable::operator+(const MultiplierTable& rhs) const
{
    if (!(grid_ == rhs.grid_) || n_ != rhs.n_)
        throw GridMismatch("multiplier tables live on different grids");
    MultiplierTable out(grid_, n_);
    out.values_ = values_ + rhs.values_;
    return out;
}

MultiplierTable MultiplierTable::scaled(cplx t) const
{
    MultiplierTable out(grid_, n_);
    out.values_ = t * values_;
    return out;
}

MultiplierTable MultiplierTable::shifted(cplx t) const
{
    MultiplierTable out = *this;
    for (long k = 0; k < grid_.sites(); ++k)
        for (int a = 0; a < n_; ++a)
            out.values_[(k * n_ + a) * n_ + a] += t;
    return out;
}

MultiplierTable MultiplierTable::adjoint() const
{
    MultiplierTable out(grid_, n_);
    for (long k = 0; k < grid_.sites(); ++k)
        out.set(k, at(k).adjoint());
    return out;
}

MultiplierTable symbol_table(const SymbolSpec& spec, const TorusGrid& grid)
{
    spec.validate();
    if (grid.dim() != spec.d)
        throw GridMismatch("symbol dimension does not match grid dimension");
    if (!is_dirac(spec.kind)) {
        return MultiplierTable::from_radial(grid, [&spec](double r) { return cplx(scalar_symbol(spec, r)); });
    }
    const CliffordSet gens = clifford_generators(spec.d);
    return MultiplierTable::from_function(grid, spec.n, [&](std::span<const double> xi) {
        Matrix m = Matrix::Zero(spec.n, spec.n);
        for (int j = 0; j < spec.d; ++j)
            m += xi[j] * gens.alpha[j];
        if (spec.kind == SymbolKind::DiracMassive)
            m += gens.beta;
        return m;
    });
}

// ---------------------------------------------------------------------------
// Fourier transforms

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

Vector run_fft(const TorusGrid& grid, int components, const Vector& values, int sign)
{
    if (values.size() != grid.sites() * components)
        throw GridMismatch("transform input has the wrong length");
    Vector out = values;
    std::array<int, 3> dims{grid.points(), grid.points(), grid.points()};
    auto* data = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_many_dft(grid.dim(), dims.data(), components, data, nullptr, components, 1, data,
                                  nullptr, components, 1, sign, FFTW_ESTIMATE);
    }
    if (plan == nullptr)
        throw Error("FFTW could not create a plan");
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace

Vector fourier_forward(const TorusGrid& grid, int components, const Vector& values)
{
    return run_fft(grid, components, values, FFTW_FORWARD);
}

Vector fourier_backward(const TorusGrid& grid, int components, const Vector& values)
{
    return run_fft(grid, components, values, FFTW_BACKWARD);
}

GridFunction apply_multiplier(const MultiplierTable& m, const GridFunction& f)
{
    if (!(m.grid() == f.grid) || m.components() != f.components)
        throw GridMismatch("multiplier and grid function live on different grids");
    const int n = f.components;
    Vector spec = fourier_forward(f.grid, n, f.values);
    if (n == 1) {
        spec = spec.cwiseProduct(m.raw());
    } else {
        for (long k = 0; k < f.grid.sites(); ++k)
            spec.segment(k * n, n) = m.at(k) * spec.segment(k * n, n);
    }
    Vector out = fourier_backward(f.grid, n, spec);
    out /= static_cast<double>(f.grid.sites());
    return GridFunction(f.grid, n, std::move(out));
}

Vector multiplier_kernel(const MultiplierTable& m)
{
    const auto& grid = m.grid();
    const int nn = m.components() * m.components();
    Vector kernel = fourier_backward(grid, nn, m.raw());
    kernel /= std::pow(grid.length(), grid.dim());
    return kernel;
}

Matrix dense_multiplier(const MultiplierTable& m, std::span<const long> sites)
{
    const auto& grid = m.grid();
    const int n = m.components();
    std::vector<long> all;
    if (sites.empty()) {
        all.resize(grid.sites());
        for (long x = 0; x < grid.sites(); ++x)
            all[x] = x;
        sites = all;
    }
    const long count = static_cast<long>(sites.size());
    const Vector kernel = multiplier_kernel(m);
    const double weight = grid.cell_volume();
    Matrix out(count * n, count * n);
    for (long i = 0; i < count; ++i) {
        for (long j = 0; j < count; ++j) {
            const long offset = grid.difference(sites[i], sites[j]);
            for (int b = 0; b < n; ++b)
                for (int a = 0; a < n; ++a)
                    out(i * n + a, j * n + b) = weight * kernel[(offset * n + b) * n + a];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Norms and cutoffs

namespace {

double lp_from_site_values(const std::vector<double>& a, double p, double weight)
{
    if (!(p >= 1.0))
        throw InvalidArgument("L^p norms need p >= 1");
    if (std::isinf(p))
        return a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
    const double peak = a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
    if (peak == 0.0)
        return 0.0;
    // scale by the peak so large p cannot overflow
    double sum = 0.0;
    for (double v : a)
        sum += std::pow(v / peak, p);
    return peak * std::pow(weight * sum, 1.0 / p);
}

}  // namespace

double lp_norm(const GridFunction& f, double p)
{
    std::vector<double> a(f.grid.sites());
    for (long x = 0; x < f.grid.sites(); ++x)
        a[x] = f.site_norm(x);
    return lp_from_site_values(a, p, f.grid.cell_volume());
}

double lp_norm(const PotentialField& v, double p)
{
    std::vector<double> a(v.grid().sites());
    for (long x = 0; x < v.grid().sites(); ++x)
        a[x] = v.abs_at(x);
    return lp_from_site_values(a, p, v.grid().cell_volume());
}

double SmoothCutoff::operator()(double r) const
{
    const double tau = (r - center) / half_width;
    if (std::abs(tau) >= 1.0)
        return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - tau * tau));
}

SmoothCutoff smooth_cutoff(double center, double half_width)
{
    if (!(half_width > 0.0))
        throw InvalidArgument("cutoff half width must be positive");
    return SmoothCutoff{center, half_width};
}

}  // namespace nsa
