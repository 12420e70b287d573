#pragma once

// Periodic torus discretization of R^d: grid geometry, grid functions,
// potentials, Fourier multipliers and quadrature norms.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "nsa/symbols.hpp"
#include "nsa/types.hpp"

namespace nsa {

inline constexpr long kDefaultSiteCap = 8192;

// Largest N per axis admitted in dimension d when the site cap is the default.
int default_point_cap(int d);

// Torus [-L/2, L/2)^d sampled at N points per axis.  Mode k (FFT order)
// carries the unit frequency k/L with k in {-N/2, ..., N/2-1}.
class TorusGrid {
public:
    TorusGrid(int d, int points, double length, long site_cap = kDefaultSiteCap);

    int dim() const noexcept { return d_; }
    int points() const noexcept { return points_; }
    double length() const noexcept { return length_; }
    double spacing() const noexcept { return length_ / points_; }
    double cell_volume() const noexcept;
    long sites() const noexcept { return sites_; }
    long site_cap() const noexcept { return site_cap_; }

    // Throws SizeCapExceeded if sites()*components exceeds the cap.
    void require_components(int components) const;

    std::array<int, 3> multi_index(long flat) const;
    long flat_index(const std::array<int, 3>& idx) const;

    // Physical position of a site, centred so that site N/2 sits at 0.
    std::vector<double> position(long site) const;
    // Signed integer lattice index of FFT slot j.
    int frequency_index(int j) const noexcept { return j < points_ / 2 ? j : j - points_; }
    std::vector<double> frequency(long mode) const;
    double frequency_norm(long mode) const;

    // Flat index of (x - y) mod N.
    long difference(long x, long y) const;
    // Shortest periodic distance between the origin and site offset `flat`.
    double periodic_radius(long flat) const;

    // Same N, side length multiplied by `factor`.
    TorusGrid rescaled(double factor) const;
    // Same L, N multiplied by `factor`.
    TorusGrid refined(int factor) const;

    bool operator==(const TorusGrid& other) const noexcept;

private:
    int d_;
    int points_;
    double length_;
    long sites_;
    long site_cap_;
};

// n-component complex samples on a grid, stored site-major: value (x, a)
// lives at x*n + a.
struct GridFunction {
    TorusGrid grid;
    int components = 1;
    Vector values;

    GridFunction(TorusGrid g, int n);
    GridFunction(TorusGrid g, int n, Vector v);

    cplx& operator()(long site, int a) { return values[site * components + a]; }
    cplx operator()(long site, int a) const { return values[site * components + a]; }
    // Euclidean norm of the spinor at a site.
    double site_norm(long site) const;
};

// Complex scalar (n = 1) or n x n matrix samples of a potential.  Matrix
// values are column-major per site.
class PotentialField {
public:
    PotentialField(TorusGrid grid, int n);
    PotentialField(TorusGrid grid, int n, Vector values);

    static PotentialField scalar(TorusGrid grid, Vector values);
    // V = iW; throws InvalidArgument unless W is pointwise Hermitian PSD.
    static PotentialField purely_imaginary(const PotentialField& w);

    const TorusGrid& grid() const noexcept { return grid_; }
    int components() const noexcept { return n_; }
    const Vector& values() const noexcept { return values_; }

    Matrix at(long site) const;
    void set(long site, const Matrix& m);
    cplx scalar_at(long site) const { return values_[site * n_ * n_]; }
    bool is_scalar() const noexcept { return n_ == 1; }

    // Scalar field times the n x n identity.
    PotentialField broadcast(int n) const;
    PotentialField scaled(cplx t) const;
    // Pointwise operator norm.
    double abs_at(long site) const;
    double max_abs() const;
    bool is_zero() const;
    // Sites where the potential is not identically zero.
    std::vector<long> support() const;

    // True when V = iW with W Hermitian positive semidefinite at every site.
    bool is_imaginary_psd(double tol = 1e-12) const;
    bool certified_imaginary() const noexcept { return certified_imaginary_; }

private:
    TorusGrid grid_;
    int n_;
    Vector values_;
    bool certified_imaginary_ = false;
};

// A Fourier multiplier m(xi) tabulated on the frequency lattice.
class MultiplierTable {
public:
    MultiplierTable(TorusGrid grid, int n);

    static MultiplierTable from_function(const TorusGrid& grid, int n,
                                         const std::function<Matrix(std::span<const double>)>& m);
    static MultiplierTable from_radial(const TorusGrid& grid,
                                       const std::function<cplx(double)>& m);
    static MultiplierTable identity(const TorusGrid& grid, int n);

    const TorusGrid& grid() const noexcept { return grid_; }
    int components() const noexcept { return n_; }
    Matrix at(long mode) const;
    void set(long mode, const Matrix& m);
    cplx entry(long mode, int a, int b) const { return values_[(mode * n_ + b) * n_ + a]; }
    Vector& raw() noexcept { return values_; }
    const Vector& raw() const noexcept { return values_; }

    MultiplierTable operator*(const MultiplierTable& rhs) const;
    MultiplierTable operator+(const MultiplierTable& rhs) const;
    MultiplierTable scaled(cplx t) const;
    MultiplierTable shifted(cplx t) const;  // m + t I
    MultiplierTable adjoint() const;        // pointwise conjugate transpose

private:
    TorusGrid grid_;
    int n_;
    Vector values_;
};

// T(xi_k) on every lattice mode.
MultiplierTable symbol_table(const SymbolSpec& spec, const TorusGrid& grid);

// Unnormalized multi-dimensional DFTs applied component-wise.
// forward: sum_x f(x) e^{-2 pi i k.x/N};  backward: sum_k g(k) e^{+2 pi i k.x/N}.
Vector fourier_forward(const TorusGrid& grid, int components, const Vector& values);
Vector fourier_backward(const TorusGrid& grid, int components, const Vector& values);

GridFunction apply_multiplier(const MultiplierTable& m, const GridFunction& f);

// Convolution kernel of m(D) on the torus: K_ab(x) = L^{-d} sum_k m_ab(k) e^{2 pi i k.x/L},
// stored like MultiplierTable (site-major n x n blocks, column-major).
Vector multiplier_kernel(const MultiplierTable& m);

// Dense matrix of m(D) restricted to the listed sites (all sites if empty):
// block (x, y) = h^d K(x - y).
Matrix dense_multiplier(const MultiplierTable& m, std::span<const long> sites = {});

// Riemann-sum L^p norm, p in [1, inf].
double lp_norm(const GridFunction& f, double p);
double lp_norm(const PotentialField& v, double p);

// Radial bump exp(1 - 1/(1 - tau^2)), tau = (|xi| - center)/half_width.
struct SmoothCutoff {
    double center;
    double half_width;

    double operator()(double r) const;
};

SmoothCutoff smooth_cutoff(double center, double half_width);

}  // namespace nsa
