// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nsa/birman_schwinger.hpp"
#include "nsa/certlab.hpp"
#include "nsa/conformal.hpp"
#include "nsa/dense.hpp"
#include "nsa/experiment.hpp"
#include "nsa/resolvent.hpp"
#include "../support.hpp"

using namespace nsa;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= budget_s;
    const bool ok = out.pass && in_time;
    failures += ok ? 0 : 1;
    std::printf("%s criterion %d: %s (%s; %.1f s of %.0f s)\n", ok ? "PASS" : "FAIL", id, title, out.detail.c_str(),
                secs, budget_s);
    std::fflush(stdout);
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// 1 ------------------------------------------------------------------------

Outcome bs_equivalence()
{
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    const TorusGrid g(1, 256, 30.0);
    const int order = det_order(schatten_exponent(spec, 1.0));
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> are(-3.0, -0.5), aim(-1.0, 1.0), width(0.3, 0.8), shift(-2.0, 2.0);

    double worst_residual = 0.0, worst_match = 0.0;
    int discrete = 0, roots = 0, artifact_zone = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Json family = {{"name", "gaussian"},
                             {"amplitude", {are(rng), aim(rng)}},
                             {"width", width(rng)},
                             {"center", {shift(rng)}}};
        const auto factory = [&](const TorusGrid& gg) { return make_potential(gg, family); };
        const PotentialField v = factory(g);
        const auto points = compute_spectrum(spec, g, factory).discrete();
        for (const auto& p : points) {
            worst_residual = std::max(worst_residual, bs_principle_check(spec, g, v, p.z));
            ++discrete;
        }

        // boxes clear of sigma(H0) by more than the classifier's eta band
        const double r = 1.0 + v.max_abs();
        const std::vector<Rectangle> boxes = {
            {-r, -0.05, -r, r}, {-0.05, r, 0.6, r}, {-0.05, r, -r, -0.6}};
        const DetFunction h = make_det_function(spec, g, v, order);
        for (const auto& box : boxes) {
            for (const auto& root : find_det_zeros(h, box)) {
                if (dist_to_spectrum(spec, root.z) <= default_eta(spec, g, root.z)) {
                    ++artifact_zone;
                    continue;
                }
                ++roots;
                double best = kInf;
                for (const auto& p : points)
                    best = std::min(best, std::abs(p.z - root.z));
                worst_match = std::max(worst_match, best);
            }
        }
    }
    const bool ok = discrete > 0 && roots > 0 && worst_residual < 1e-6 && worst_match < 1e-6;
    return {ok, std::to_string(discrete) + " discrete eigenvalues, max BS residual " + fmt(worst_residual) + "; " +
                    std::to_string(roots) + " det_" + std::to_string(order) + " roots, max distance " +
                    fmt(worst_match) + ", " + std::to_string(artifact_zone) + " in the eta band"};
}

// 2 ------------------------------------------------------------------------

Outcome dirac_factorization()
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    int pairs = 0;
    for (int d : {1, 2}) {
        const TorusGrid g(d, d == 1 ? 64 : 16, 8.0);
        for (SymbolKind kind : {SymbolKind::DiracMassless, SymbolKind::DiracMassive}) {
            const auto spec = SymbolSpec::make(kind, d);
            for (int i = 0; i < 50; ++i) {
                const cplx z(u(rng), u(rng) > 0.0 ? 0.1 + std::abs(u(rng)) : -0.1 - std::abs(u(rng)));
                const GridFunction f = testing::random_function(g, spec.n, 1000 * d + i);
                const GridFunction a = resolvent_apply(ResolventHandle(spec, g, z), f);
                const GridFunction b = dirac_factorized_apply(spec, g, z, f);
                worst = std::max(worst, testing::rel_err(a.values, b.values));
                ++pairs;
            }
        }
    }
    return {worst < 1e-10, std::to_string(pairs) + " (f, z) pairs, max relative difference " + fmt(worst)};
}

// 3 ------------------------------------------------------------------------

Outcome exact_scaling()
{
    double spectral = 0.0, ratio = 0.0;
    const std::vector<double> ts = {0.25, 0.5, 1.0, 2.0, 4.0};
    struct Case {
        int d, n;
        double l, s, q;
    };
    for (const Case c : {Case{1, 128, 20.0, 1.5, 1.0}, Case{2, 12, 8.0, 1.5, 1.4}}) {
        const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, c.d, c.s);
        const TorusGrid g(c.d, c.n, c.l);
        const Json family = {{"name", "gaussian"}, {"amplitude", {-2.0, -0.4}}, {"width", 0.8}};
        const PotentialField v = make_potential(g, family);
        const Vector base = eigensolve(assemble_hamiltonian(spec, g, v));
        for (double t : ts) {
            const PotentialField vt = dilate(v, t, c.s);
            const Vector scaled = eigensolve(assemble_hamiltonian(spec, vt.grid(), vt));
            const double f = std::pow(t, c.s);
            for (const cplx z : base) {
                double best = kInf;
                for (const cplx w : scaled)
                    best = std::min(best, std::abs(w - f * z));
                spectral = std::max(spectral, best / std::max(1e-300, std::abs(f * z)));
            }
        }
        IndividualOptions opt;
        opt.dilations = ts;
        const auto cert = verify_individual_bounds(spec, PotentialSource::family(g, family), c.q, opt);
        if (cert.verdict == Verdict::ReportOnly)
            return {false, "no discrete eigenvalues for the ratio check"};
        ratio = std::max(ratio, cert.lhs);
    }
    return {spectral < 1e-10 && ratio < 1e-10,
            "max relative spectral mismatch " + fmt(spectral) + ", max ratio drift " + fmt(ratio)};
}

// 4 ------------------------------------------------------------------------

std::vector<cplx> geometric_ray(double arg, double lo, int n)
{
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i)
        out.push_back(std::polar(lo * std::pow(2.0, i), arg));
    return out;
}

Outcome slope_fits()
{
    const Json well = {{"name", "gaussian"}, {"amplitude", {-1.0, -0.2}}, {"width", 0.6}};
    const auto src = PotentialSource::family(TorusGrid(1, 128, 20.0), well);

    const auto frac = verify_schatten_scaling(SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5), src, 1.0,
                                              geometric_ray(2.0, 1.0 / 32.0, 10));
    SchattenOptions small;
    small.branch = 's';
    const auto rel = verify_schatten_scaling(SymbolSpec::make(SymbolKind::Relativistic, 1, 1.0), src, 1.0,
                                             geometric_ray(2.0, std::pow(2.0, -13.0), 10), small);
    const auto dirac = verify_schatten_scaling(SymbolSpec::make(SymbolKind::DiracMassless, 2),
                                               PotentialSource::family(TorusGrid(2, 16, 8.0), well, 2), 1.5,
                                               geometric_ray(1.0, 4.0, 8));
    const bool ok = std::abs(frac.lhs - (-1.0 / 3.0)) <= 0.1 && std::abs(rel.lhs - (-0.5)) <= 0.1 &&
                    std::abs(dirac.lhs - 1.0 / 3.0) <= 0.15;
    return {ok, "fractional " + fmt(frac.lhs) + " vs -1/3, relativistic small |z| " + fmt(rel.lhs) +
                    " vs -1/2, massless Dirac d=2 " + fmt(dirac.lhs) + " vs 1/3"};
}

// 5 ------------------------------------------------------------------------

Outcome uniformity_contrast()
{
    const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, 1.5);
    const auto cert = verify_uniform_resolvent(spec, TorusGrid(1, 128, 20.0), Region::rectangle(-2.0, 2.0, 0.5, 1.5),
                                               uniform_p_range(spec).second);
    const double growth = cert.diagnostics["contrast"]["growth"];
    return {cert.verdict == Verdict::Pass && cert.lhs <= 4.0 && growth >= 10.0,
            "p = 1: max/median " + fmt(cert.lhs) + "; L2 control growth " + fmt(growth) + "x over 100x smaller Im z"};
}

// 6 ------------------------------------------------------------------------

Outcome conformal_atlas()
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> rad(0.0, 0.999), ang(0.0, 2.0 * kPi);
    auto disk_point = [&] { return std::polar(std::sqrt(rad(rng)), ang(rng)); };

    const std::vector<ConformalAtlas> atlases = {
        ConformalAtlas(SymbolKind::FractionalLaplacian, {-1.0, 0.5}),
        ConformalAtlas(SymbolKind::Relativistic, -4.0),
        ConformalAtlas(SymbolKind::DiracMassless, {0.3, 1.2}, Chart::Upper),
        ConformalAtlas(SymbolKind::DiracMassless, {0.3, -1.2}, Chart::Lower),
        ConformalAtlas(SymbolKind::DiracMassive, {0.0, 2.0})};
    double trip = 0.0, nu_trip = 0.0, koebe_lo = kInf, koebe_hi = 0.0;
    bool zero_exact = true;
    for (const auto& atlas : atlases) {
        zero_exact = zero_exact && atlas.psi(atlas.z0()) == cplx(0.0, 0.0);
        for (int i = 0; i < 1000; ++i) {
            const cplx w = disk_point();
            trip = std::max(trip, std::abs(atlas.psi(atlas.psi_inverse(w)) - w));
            nu_trip = std::max(nu_trip, std::abs(nu_map(nu_inverse(w, atlas.z0_tilde()), atlas.z0_tilde()) - w));
        }
        for (double re = -4.0; re <= 4.0; re += 0.25)
            for (double im : {-3.0, -1.0, -0.3, -0.05, 0.05, 0.3, 1.0, 3.0}) {
                const cplx z(re, im);
                if (!atlas.in_domain(z) || std::abs(z - atlas.z0()) < 1e-3)
                    continue;
                const double k = koebe_ratio(atlas, z);
                koebe_lo = std::min(koebe_lo, k);
                koebe_hi = std::max(koebe_hi, k);
            }
    }
    const ConformalAtlas massive(SymbolKind::DiracMassive, {0.0, 2.0});
    std::array<double, 3> lo{kInf, kInf, kInf}, hi{0.0, 0.0, 0.0};
    for (double re = -4.0; re <= 4.0; re += 0.2)
        for (double im : {-3.0, -1.0, -0.2, -0.02, 0.02, 0.2, 1.0, 3.0}) {
            const auto q = massive_dirac_distortion(massive, {re, im});
            for (int k = 0; k < 3; ++k) {
                lo[k] = std::min(lo[k], q[k]);
                hi[k] = std::max(hi[k], q[k]);
            }
        }
    double spread = 0.0;
    for (int k = 0; k < 3; ++k)
        spread = std::max(spread, hi[k] / lo[k]);
    const bool ok = trip < 1e-12 && nu_trip < 1e-12 && zero_exact && koebe_lo >= 0.25 && koebe_hi <= 4.0 &&
                    spread <= 16.0;
    return {ok, "psi round trip " + fmt(trip) + ", nu round trip " + fmt(nu_trip) + ", psi(z0) = 0 " +
                    (zero_exact ? "exact" : "NOT exact") + ", Koebe ratios in [" + fmt(koebe_lo) + ", " +
                    fmt(koebe_hi) + "], distortion spread " + fmt(spread)};
}

// 7 ------------------------------------------------------------------------

Outcome determinant_calculus()
{
    double det1 = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Matrix m = testing::random_matrix(6, 6, 300 + t) * 0.3;
        const cplx plain = (Matrix::Identity(6, 6) + m).determinant();
        det1 = std::max(det1, std::abs(regularized_det(dense::eigenvalues(m), 1).value - plain) / std::abs(plain));
    }
    Vector diag(3);
    diag << 0.5, cplx(-0.25, 0.5), 2.0;
    cplx closed = 1.0;
    for (const cplx mu : diag)
        closed *= (1.0 + mu) * std::exp(-mu);
    const double det2 = std::abs(regularized_det(diag, 2).value - closed);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> scale(0.05, 3.0);
    double margin = kInf;
    for (int t = 0; t < 100; ++t) {
        const Matrix m = testing::random_matrix(8, 8, 5000 + t) * (scale(rng) / 8.0);
        const Vector mu = dense::eigenvalues(m);
        const RealVector sv = dense::singular_values(m);
        for (int n = 1; n <= 4; ++n)
            margin = std::min(margin, det_bound_constant(n) * std::pow(schatten_norm(sv, n).norm, n) -
                                          regularized_det(mu, n).log_abs);
    }
    return {det1 < 1e-12 && det2 < 1e-12 && margin >= -1e-12,
            "det_1 vs det " + fmt(det1) + ", det_2 closed form " + fmt(det2) +
                ", min slack of the bound over 100 matrices x n=1..4 " + fmt(margin)};
}

// 8 ------------------------------------------------------------------------

Outcome imaginary_potentials()
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> amp(0.5, 3.0), width(0.4, 1.2);
    double identity = 0.0, normalization = 0.0;
    int eigenvalues = 0;
    bool all_pass = true;
    for (int i = 0; i < 10; ++i) {
        const double s = i % 2 ? 1.5 : 1.0;
        const auto spec = SymbolSpec::make(SymbolKind::FractionalLaplacian, 1, s);
        const Json w = {{"name", "gaussian"}, {"amplitude", amp(rng)}, {"width", width(rng)}};
        ImaginaryOptions opt;
        opt.seed = i;
        const auto cert = verify_imaginary(spec, PotentialSource::family(TorusGrid(1, 128, 20.0), w), 1.0, opt);
        all_pass = all_pass && cert.verdict == Verdict::Pass;
        identity = std::max(identity, cert.diagnostics["identity_residual"].get<double>());
        normalization = std::max(normalization, cert.lhs);
        eigenvalues += static_cast<int>(cert.diagnostics["eigenvalues"].size());
    }
    return {all_pass && eigenvalues > 0 && identity < 1e-10 && normalization < 1e-6,
            "identity residual " + fmt(identity) + ", max |Re<Qg,g>/<g,g> - 1| " + fmt(normalization) + " over " +
                std::to_string(eigenvalues) + " eigenvalues"};
}

// 9 ------------------------------------------------------------------------

Outcome determinism()
{
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "certlab-acceptance";
    fs::remove_all(root);
    auto cfg = ExperimentConfig::load(GOLDEN_CONFIG);
    const auto a = run_experiment(cfg, root);
    cfg.workers = 1;
    const auto b = run_experiment(cfg, root);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const std::string ja = slurp(a.directory / "certificates.json");
    const std::string jb = slurp(b.directory / "certificates.json");
    return {a.exit_code == 0 && b.exit_code == 0 && !ja.empty() && ja == jb,
            std::to_string(a.certificates.size()) + " certificates, " + std::to_string(ja.size()) + " bytes, " +
                (ja == jb ? "identical" : "DIFFERENT")};
}

}  // namespace

int main()
{
    criterion(1, "Birman-Schwinger equivalence on 20 complex wells", 300.0, bs_equivalence);
    criterion(2, "Dirac factorization identity", 60.0, dirac_factorization);
    criterion(3, "exact scaling suite", 120.0, exact_scaling);
    criterion(4, "N(z) slope fits", 600.0, slope_fits);
    criterion(5, "uniformity contrast", 600.0, uniformity_contrast);
    criterion(6, "conformal atlas", 60.0, conformal_atlas);
    criterion(7, "determinant calculus", 60.0, determinant_calculus);
    criterion(8, "purely imaginary potentials", 300.0, imaginary_potentials);
    criterion(9, "golden-config determinism", 600.0, determinism);
    return failures == 0 ? 0 : 1;
}
