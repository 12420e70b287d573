#include "nsa/birman_schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "nsa/dense.hpp"
#include "nsa/error.hpp"

namespace nsa {

HalfPotentials half_potentials(const PotentialField& v)
{
    const auto& grid = v.grid();
    const int n = v.components();
    PotentialField abs_half(grid, n), signed_half(grid, n);
    if (n == 1) {
        Vector a = Vector::Zero(grid.sites()), b = Vector::Zero(grid.sites());
        for (long x = 0; x < grid.sites(); ++x) {
            const cplx val = v.values()[x];
            const double r = std::abs(val);
            if (r == 0.0)
                continue;
            const double root = std::sqrt(r);
            a[x] = root;
            b[x] = val / root;
        }
        return {PotentialField(grid, 1, std::move(a)), PotentialField(grid, 1, std::move(b))};
    }
    for (long x = 0; x < grid.sites(); ++x) {
        const Matrix m = v.at(x);
        if (m.isZero(0.0))
            continue;
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const RealVector root = svd.singularValues().cwiseSqrt();
        const Matrix& u = svd.matrixU();
        const Matrix& w = svd.matrixV();
        abs_half.set(x, w * root.asDiagonal() * w.adjoint());
        signed_half.set(x, u * root.asDiagonal() * w.adjoint());
    }
    return {std::move(abs_half), std::move(signed_half)};
}

// ---------------------------------------------------------------------------

BSOperator::BSOperator(Matrix matrix, std::vector<long> support, int components, long full_dimension, cplx z,
                       BSOrder order)
    : matrix_(std::move(matrix)), support_(std::move(support)), components_(components),
      full_dimension_(full_dimension), z_(z), order_(order), cache_(std::make_shared<Cache>())
{
    if (matrix_.rows() != matrix_.cols()
        || matrix_.rows() != static_cast<Eigen::Index>(support_.size()) * components_)
        throw GridMismatch("Birman-Schwinger block does not match its support");
}

const RealVector& BSOperator::singular_values() const
{
    std::call_once(cache_->sv_once, [this] { cache_->sv = dense::singular_values(matrix_); });
    return cache_->sv;
}

const Vector& BSOperator::eigenvalues() const
{
    std::call_once(cache_->ev_once, [this] { cache_->ev = dense::eigenvalues(matrix_); });
    return cache_->ev;
}

double BSOperator::operator_norm() const
{
    const auto& sv = singular_values();
    return sv.size() == 0 ? 0.0 : sv[0];
}

namespace {

// rows (or columns) of the site-blocked matrix multiplied by per-site blocks
void scale_rows(Matrix& m, const PotentialField& f, const std::vector<long>& sites)
{
    const int n = f.components();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const Eigen::Index r = static_cast<Eigen::Index>(i) * n;
        if (n == 1)
            m.row(r) *= f.values()[sites[i]];
        else
            m.middleRows(r, n) = (f.at(sites[i]) * m.middleRows(r, n)).eval();
    }
}

void scale_cols(Matrix& m, const PotentialField& f, const std::vector<long>& sites)
{
    const int n = f.components();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const Eigen::Index c = static_cast<Eigen::Index>(i) * n;
        if (n == 1)
            m.col(c) *= f.values()[sites[i]];
        else
            m.middleCols(c, n) = (m.middleCols(c, n) * f.at(sites[i])).eval();
    }
}

}  // namespace

BSOperator assemble_bs(const ResolventHandle& r, const PotentialField& v, BSOrder order)
{
    if (!(v.grid() == r.grid()))
        throw GridMismatch("potential and resolvent live on different grids");
    if (v.components() != r.spec().n)
        throw GridMismatch("potential has " + std::to_string(v.components()) + " components, the symbol "
                           + std::to_string(r.spec().n));
    const int n = v.components();
    const long full = r.grid().sites() * n;
    std::vector<long> support = v.support();
    if (support.empty())
        return BSOperator(Matrix(0, 0), {}, n, full, r.z(), order);
    Matrix m = dense_multiplier(r.table(), support);
    const HalfPotentials half = half_potentials(v);
    const PotentialField& left = order == BSOrder::AbsLeft ? half.abs_half : half.signed_half;
    const PotentialField& right = order == BSOrder::AbsLeft ? half.signed_half : half.abs_half;
    scale_rows(m, left, support);
    scale_cols(m, right, support);
    return BSOperator(std::move(m), std::move(support), n, full, r.z(), order);
}

BSOperator assemble_bs(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v, cplx z,
                       BSOrder order)
{
    return assemble_bs(ResolventHandle(spec, grid, z), v, order);
}

// ---------------------------------------------------------------------------

SchattenReport schatten_norm(const RealVector& sv, double alpha)
{
    if (!(alpha >= 1.0))
        throw InvalidArgument("Schatten exponent must be at least 1");
    SchattenReport out;
    out.alpha = alpha;
    if (sv.size() == 0 || sv[0] == 0.0)
        return out;
    const double floor = 1e-13 * sv[0];
    if (std::isinf(alpha)) {
        out.norm = sv[0];
        for (Eigen::Index j = 0; j < sv.size(); ++j)
            out.retained += sv[j] >= floor ? 1 : 0;
        return out;
    }
    // scaled power sum avoids overflow for large alpha
    double sum = 0.0;
    for (Eigen::Index j = 0; j < sv.size(); ++j) {
        if (sv[j] < floor)
            continue;
        sum += std::pow(sv[j] / sv[0], alpha);
        ++out.retained;
    }
    out.norm = sv[0] * std::pow(sum, 1.0 / alpha);
    return out;
}

SchattenReport schatten_norm(const BSOperator& m, double alpha)
{
    return schatten_norm(m.singular_values(), alpha);
}

DetValue regularized_det(const Vector& mu, int order)
{
    if (order < 1)
        throw InvalidArgument("determinant order must be at least 1");
    DetValue out;
    out.order = order;
    double log_abs = 0.0;
    double arg = 0.0;
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
        const cplx m = mu[j];
        const cplx one_plus = 1.0 + m;
        if (one_plus == cplx(0.0, 0.0)) {
            out.log_abs = -kInf;
            out.arg = 0.0;
            out.value = 0.0;
            return out;
        }
        log_abs += 0.5 * std::log1p(2.0 * m.real() + std::norm(m));
        arg += std::arg(one_plus);
        cplx power = 1.0;
        cplx correction = 0.0;
        for (int k = 1; k < order; ++k) {
            power *= m;
            correction += (k % 2 == 1 ? -1.0 : 1.0) * power / static_cast<double>(k);
        }
        log_abs += correction.real();
        arg += correction.imag();
    }
    out.log_abs = log_abs;
    out.arg = std::remainder(arg, 2.0 * kPi);
    out.value = std::exp(log_abs) * std::polar(1.0, out.arg);
    return out;
}

DetValue regularized_det(const BSOperator& m, int order)
{
    return regularized_det(m.eigenvalues(), order);
}

double det_bound_constant(int order)
{
    if (order < 1)
        throw InvalidArgument("determinant order must be at least 1");
    if (order == 1)
        return 1.0;
    if (order == 2)
        return 0.5;
    return std::exp(1.0) * (2.0 + std::log(static_cast<double>(order)));
}

double bs_principle_check(const BSOperator& m)
{
    double best = 1.0;
    for (const cplx mu : m.eigenvalues())
        best = std::min(best, std::abs(mu + 1.0));
    return best;
}

double bs_principle_check(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v, cplx z)
{
    return bs_principle_check(assemble_bs(spec, grid, v, z));
}

// ---------------------------------------------------------------------------

RegimeCheck check_regime(const SymbolSpec& spec, double q)
{
    const double d = spec.d;
    const double s = spec.s;
    RegimeCheck out;
    constexpr double tol = 1e-12;
    if (s >= 2.0 * d / (d + 1.0) - tol) {
        out.regime = 'a';
        const double lo = d / s;
        const double hi = 0.5 * (d + 1.0);
        std::ostringstream msg;
        if (!(q >= lo - tol && q <= hi + tol)) {
            msg << "q = " << q << " violates the potential assumption d/s <= q <= (d+1)/2, i.e. " << lo
                << " <= q <= " << hi;
            out.message = msg.str();
            return out;
        }
        out.ok = true;
        return out;
    }
    out.regime = 'b';
    out.ok = true;
    out.message = "s < 2d/(d+1): V must lie in L^{d/s} and L^{(d+1)/2}, q is not used";
    return out;
}

double schatten_exponent(const SymbolSpec& spec, double q)
{
    const RegimeCheck reg = check_regime(spec, q);
    if (!reg.ok)
        throw InvalidArgument(reg.message);
    const double d = spec.d;
    if (spec.d == 1)
        return 2.0;
    if (reg.regime == 'a')
        return q * (d - 1.0) / (d - q);
    if (spec.d == 2)
        return 3.0;
    return d / spec.s + 0.5;
}

int det_order(double alpha)
{
    if (!(alpha >= 1.0))
        throw InvalidArgument("Schatten exponent must be at least 1");
    return static_cast<int>(std::ceil(alpha - 1e-12));
}

// ---------------------------------------------------------------------------

namespace {

double wrap(double a)
{
    return std::remainder(a, 2.0 * kPi);
}

class ZeroFinder {
public:
    ZeroFinder(const DetFunction& h, const ContourOptions& opt, double scale) : h_(h), opt_(opt), scale_(scale) {}

    const DetValue& eval(cplx z)
    {
        const auto key = std::make_pair(z.real(), z.imag());
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        return cache_.emplace(key, h_(z)).first->second;
    }

    double segment_arg(cplx a, cplx b, int depth)
    {
        const double delta = wrap(eval(b).arg - eval(a).arg);
        if (std::abs(delta) <= opt_.max_step_arg || depth >= opt_.max_refine)
            return delta;
        const cplx mid = 0.5 * (a + b);
        return segment_arg(a, mid, depth + 1) + segment_arg(mid, b, depth + 1);
    }

    int winding(const Rectangle& r)
    {
        const cplx corners[5] = {{r.re_lo, r.im_lo}, {r.re_hi, r.im_lo}, {r.re_hi, r.im_hi}, {r.re_lo, r.im_hi},
                                 {r.re_lo, r.im_lo}};
        double total = 0.0;
        const int m = opt_.edge_samples;
        for (int e = 0; e < 4; ++e) {
            for (int k = 0; k < m; ++k) {
                const cplx a = corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(k) / m);
                const cplx b = k + 1 == m ? corners[e + 1]
                                          : corners[e] + (corners[e + 1] - corners[e]) * (static_cast<double>(k + 1) / m);
                total += segment_arg(a, b, 0);
            }
        }
        return static_cast<int>(std::lround(total / (2.0 * kPi)));
    }

    std::optional<cplx> polish(cplx start, const Rectangle& r)
    {
        const double size = std::max(r.re_hi - r.re_lo, r.im_hi - r.im_lo);
        cplx z0 = start;
        cplx z1 = start + cplx(0.1 * size, 0.05 * size);
        cplx h0 = h_(z0).value;
        cplx h1 = h_(z1).value;
        for (int it = 0; it < opt_.secant_iters; ++it) {
            if (h1 == cplx(0.0, 0.0))
                return z1;
            const cplx denom = h1 - h0;
            if (denom == cplx(0.0, 0.0))
                break;
            const cplx z2 = z1 - h1 * (z1 - z0) / denom;
            if (!std::isfinite(z2.real()) || !std::isfinite(z2.imag()))
                return std::nullopt;
            z0 = z1;
            h0 = h1;
            z1 = z2;
            if (std::abs(z1 - z0) < 1e-14 * std::max(1.0, std::abs(z1)))
                break;
            try {
                h1 = h_(z1).value;
            } catch (const ResolventError&) {
                return std::nullopt;
            }
        }
        const double margin = 1e-9 * scale_;
        if (z1.real() < r.re_lo - margin || z1.real() > r.re_hi + margin || z1.imag() < r.im_lo - margin
            || z1.imag() > r.im_hi + margin)
            return std::nullopt;
        return z1;
    }

    void solve(const Rectangle& r, int w, int depth, std::vector<ContourRoot>& out)
    {
        if (w == 0)
            return;
        const double width = r.re_hi - r.re_lo;
        const double height = r.im_hi - r.im_lo;
        const cplx center(0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi));
        const bool tiny = std::max(width, height) < opt_.box_tol * scale_ || depth >= opt_.max_depth;
        if (w == 1 || tiny) {
            std::optional<cplx> z;
            try {
                z = polish(center, r);
            } catch (const ResolventError&) {
            }
            if (z) {
                out.push_back({*z, w, h_(*z).log_abs});
                return;
            }
            if (tiny) {
                out.push_back({center, w, eval(center).log_abs});
                return;
            }
        }
        // split the longer side slightly off centre so cut lines rarely hit a zero
        const double frac = 0.5 + 0.0173 * ((depth % 2) ? 1.0 : -1.0);
        Rectangle a = r, b = r;
        if (width >= height) {
            const double cut = r.re_lo + frac * width;
            a.re_hi = cut;
            b.re_lo = cut;
        } else {
            const double cut = r.im_lo + frac * height;
            a.im_hi = cut;
            b.im_lo = cut;
        }
        const int wa = winding(a);
        const int wb = winding(b);
        solve(a, wa, depth + 1, out);
        solve(b, wb, depth + 1, out);
    }

private:
    const DetFunction& h_;
    ContourOptions opt_;
    double scale_;
    std::map<std::pair<double, double>, DetValue> cache_;
};

double box_scale(const Rectangle& box)
{
    return std::max({1.0, std::abs(box.re_lo), std::abs(box.re_hi), std::abs(box.im_lo), std::abs(box.im_hi)});
}

void require_box(const Rectangle& box)
{
    if (!(box.re_hi > box.re_lo && box.im_hi > box.im_lo))
        throw InvalidArgument("contour rectangle must have positive width and height");
}

}  // namespace

int winding_number(const DetFunction& h, const Rectangle& box, const ContourOptions& opt)
{
    require_box(box);
    ZeroFinder finder(h, opt, box_scale(box));
    return finder.winding(box);
}

std::vector<ContourRoot> find_det_zeros(const DetFunction& h, const Rectangle& box, const ContourOptions& opt)
{
    require_box(box);
    ZeroFinder finder(h, opt, box_scale(box));
    std::vector<ContourRoot> roots;
    const int w = finder.winding(box);
    if (w < 0)
        throw SolverError("negative winding number: the determinant has a pole inside the contour");
    finder.solve(box, w, 0, roots);
    std::sort(roots.begin(), roots.end(), [](const ContourRoot& a, const ContourRoot& b) {
        return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
    });
    return roots;
}

DetFunction make_det_function(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v, int order,
                              BSOrder variant)
{
    return [spec, grid, v, order, variant](cplx z) {
        return regularized_det(assemble_bs(spec, grid, v, z, variant), order);
    };
}

}  // namespace nsa
