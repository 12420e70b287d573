#pragma once

// Theorem-shaped experiments.  Each verifier binds the numerical modules
// together and returns a BoundCertificate; claims whose constants are not
// explicit are REPORT-ONLY, identities, scalings and residual checks get a
// PASS/FAIL verdict.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsa/birman_schwinger.hpp"
#include "nsa/conformal.hpp"
#include "nsa/potential.hpp"
#include "nsa/spectra.hpp"

namespace nsa {

enum class Verdict { Pass, Fail, ReportOnly };
std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& name);

// Compact K in C \ Lambda_c: an axis-parallel rectangle, or the annulus
// sector r_lo <= |z| <= r_hi, arg_lo <= arg z <= arg_hi (radians, arg in
// (-pi, pi]).
struct Region {
    enum class Shape { Rectangle, Sector };
    Shape shape = Shape::Rectangle;
    double a_lo = 0.0, a_hi = 0.0;  // re or |z|
    double b_lo = 0.0, b_hi = 0.0;  // im or arg z

    static Region rectangle(double re_lo, double re_hi, double im_lo, double im_hi);
    static Region sector(double r_lo, double r_hi, double arg_lo, double arg_hi);

    bool contains(cplx z) const;
    Rectangle bounding_box() const;
    // na x nb tensor grid over the region (endpoints included).
    std::vector<cplx> sample(int na, int nb) const;
    // Distance from the region to Lambda_c (inf when Lambda_c is empty).
    double critical_distance(const SymbolSpec& spec) const;
    // Throws InvalidArgument on empty ranges or when the closure meets Lambda_c.
    void validate(const SymbolSpec& spec) const;

    Json to_json() const;
    static Region from_json(const Json& j);
};

struct ScalingLaw {
    std::string quantity;
    double predicted = 0.0;
    double fitted = 0.0;
    double residual = 0.0;  // rms of the log-log fit
    double sample_lo = 0.0;
    double sample_hi = 0.0;
    int samples = 0;

    Json to_json() const;
};

struct BoundCertificate {
    std::string theorem;
    Json inputs = Json::object();
    double lhs = 0.0;
    std::optional<double> rhs;
    std::optional<double> constant;
    Verdict verdict = Verdict::ReportOnly;
    std::uint64_t seed = 0;
    std::optional<double> runtime_s;
    TorusGrid grid{1, 8, 1.0};
    Json diagnostics = Json::object();
};

// Field order: theorem, inputs, lhs, rhs, constant, verdict, seed,
// runtime_s, grid, diagnostics.  Non-finite numbers serialize as strings.
Json to_json(const BoundCertificate& c);
BoundCertificate certificate_from_json(const Json& j);

// A potential that can be resampled on refined or rescaled grids.
struct PotentialSource {
    Json descriptor;
    TorusGrid grid{1, 8, 1.0};
    PotentialFactory factory;

    PotentialField on(const TorusGrid& g) const { return factory(g); }
    PotentialField base() const { return factory(grid); }

    static PotentialSource family(const TorusGrid& grid, const Json& family, int components = 1);
    // Table potentials are Fourier-interpolated onto refined grids of the
    // same side length.
    static PotentialSource table(const PotentialField& v, Json descriptor = Json{{"name", "table"}});
};

// t V with the descriptor recording t.
PotentialSource scaled_source(const PotentialSource& v, double t);

// ---------------------------------------------------------------------------

struct MainOptions {
    double t_min = 1.0 / 64.0;
    double t_max = 64.0;
    double ladder_ratio = 1.4142135623730951;
    int bisect_steps = 8;
    int k_samples_a = 12;  // K-grid for the BS norm sweep below t*
    int k_samples_b = 8;
    std::uint64_t seed = 0;
};

BoundCertificate verify_main(const SymbolSpec& spec, const PotentialSource& v, const Region& k, double q,
                             const MainOptions& opt = {});

struct UniformOptions {
    int iters = 40;
    int k_samples_a = 6;
    int k_samples_b = 4;
    double eps_spacings = 4.0;   // Im z >= eps_spacings * level spacing
    int contrast_samples = 5;    // Im z from eta to eta/100
    std::uint64_t seed = 0;
};

// Admissible p for the uniform resolvent estimate: [2d/(d+s), 2(d+1)/(d+3)]
// when s >= 2d/(d+1); empty interval otherwise (the sum-space form applies).
std::pair<double, double> uniform_p_range(const SymbolSpec& spec);

BoundCertificate verify_uniform_resolvent(const SymbolSpec& spec, const TorusGrid& grid, const Region& k, double p,
                                          const UniformOptions& opt = {});

struct SchattenOptions {
    double tolerance = 0.1;       // |fitted - predicted|
    double max_residual = 0.05;
    // Relativistic: which regime the ray samples ('s' small |z|, 'l' large).
    char branch = 'l';
};

// Predicted exponent of N(z) for the kind (Dirac kinds: growth in 1 + |z|).
double predicted_schatten_exponent(const SymbolSpec& spec, double q, char branch);

BoundCertificate verify_schatten_scaling(const SymbolSpec& spec, const PotentialSource& v, double q,
                                         const std::vector<cplx>& ray, const SchattenOptions& opt = {});

struct IndividualOptions {
    std::vector<double> dilations = {0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> couplings = {0.5, 1.0, 2.0, 4.0};
    double tolerance = 1e-10;
};

BoundCertificate verify_individual_bounds(const SymbolSpec& spec, const PotentialSource& v, double q,
                                          const IndividualOptions& opt = {});

struct ImaginaryOptions {
    int identity_samples = 8;
    double identity_tol = 1e-10;
    double normalization_tol = 1e-6;
    std::uint64_t seed = 0;
};

// W must be a nonnegative (Hermitian PSD) field; V = iW.
BoundCertificate verify_imaginary(const SymbolSpec& spec, const PotentialSource& w, double q,
                                  const ImaginaryOptions& opt = {});

struct WeightedOptions {
    double ladder_ratio = 1.4142135623730951;
    double above_threshold = 32.0;  // ladder runs to this multiple of the threshold
    double t_start = 1.0 / 64.0;
    double exponent_slack = 0.2;
};

// Theorem id -> z-space weight.
SumWeight weight_for_theorem(const std::string& theorem);

// z0 on the far side of the eigenvalue cloud: -C ||V||_q^{sq/(sq-d)} (i C ...
// for the Dirac kinds) when sq > d, otherwise the truncation rule.
cplx choose_z0(const SymbolSpec& spec, const PotentialSource& v, double q, double c);

BoundCertificate verify_weighted_sums(const std::string& theorem, const SymbolSpec& spec, const PotentialSource& v,
                                      double q, double alpha, double eps, const WeightedOptions& opt = {});

// ---------------------------------------------------------------------------
// Scheduler

struct Job {
    std::string id;
    std::function<BoundCertificate()> run;
};

struct JobResult {
    std::string id;
    std::optional<BoundCertificate> certificate;
    std::string error;  // set when the job threw
};

// Runs jobs on `workers` threads; results come back sorted by job id.
std::vector<JobResult> run_jobs(std::vector<Job> jobs, int workers);

}  // namespace nsa
