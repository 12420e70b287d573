#pragma once

// Declarative experiment runs: configuration file, validation, scheduling of
// the certlab verifiers and report emission.  The command-line tool is a thin
// shell over this header.
//
// Configuration (JSON):
//
//   { "operator":  {"kind": "fractional-laplacian", "s": 1.5, "d": 1},
//     "grid":      {"N": 128, "L": 20.0, "refine": true, "site_cap": 8192},
//     "potential": {"family": {...}}   or   {"file": "v.json"},
//     "run": {"theorems": ["main-sum", ...], "q": 1.0, "alpha": 2.0, "eps": 0.1,
//             "region": {"rectangle": [re_lo, re_hi, im_lo, im_hi]},
//             "ray": {"arg": 2.0, "r_min": 0.03125, "r_max": 16.0, "samples": 10, "branch": "l"},
//             "p": 1.0,
//             "t_ladder": {"t_min": 0.015625, "t_max": 64.0, "ratio": 1.4142135623730951},
//             "seed": 0, "workers": 1, "record_runtime": false} }

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsa/certlab.hpp"
#include "nsa/error.hpp"

namespace nsa {

// Configuration error; path() names the offending field ("run.q").
class ConfigError : public InvalidArgument {
public:
    ConfigError(const std::string& path, const std::string& what)
        : InvalidArgument(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Theorem ids accepted in run.theorems.
const std::vector<std::string>& theorem_ids();

struct RaySpec {
    double arg = 2.0;
    double r_min = 1.0 / 32.0;
    double r_max = 16.0;
    int samples = 10;
    char branch = 'l';

    // Logarithmically spaced points r_min .. r_max at the fixed argument.
    std::vector<cplx> points() const;
};

struct ExperimentConfig {
    SymbolSpec spec;
    TorusGrid grid{1, 8, 1.0};
    bool refine = true;
    PotentialSource potential;

    std::vector<std::string> theorems;
    std::optional<double> q;
    std::optional<double> alpha;
    double eps = 0.1;
    std::optional<Region> region;
    std::optional<RaySpec> ray;
    std::optional<double> p;
    double t_min = 1.0 / 64.0;
    double t_max = 64.0;
    double t_ratio = 1.4142135623730951;
    std::uint64_t seed = 0;
    int workers = 1;
    bool record_runtime = false;

    Json source;  // the document the config was parsed from

    // Parses and validates; relative potential file paths resolve against
    // base_dir.  Throws ConfigError.
    static ExperimentConfig parse(const Json& doc, const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::string& path);

    // Exponent regimes and per-theorem requirements; throws ConfigError.
    void validate() const;
};

// Runs a single verifier for the config.  Throws on compute failures.
BoundCertificate run_theorem(const ExperimentConfig& cfg, const std::string& theorem);

enum class ReportFormat { Json, Csv, Markdown };

// Stable field order.  Throws InvalidArgument on an empty list.
void emit_report(std::ostream& out, const std::vector<BoundCertificate>& certs, ReportFormat format);
void emit_report(const std::filesystem::path& file, const std::vector<BoundCertificate>& certs,
                 ReportFormat format);

// Eigenvalues of H0 + V with labels; without refinement every point is Undecided.
std::vector<SpectralPoint> config_spectrum(const ExperimentConfig& cfg);

// Schatten norm, operator norm, log|det_n| and the BS residual along the ray.
struct BSScanRow {
    cplx z;
    double schatten = 0.0;
    double op_norm = 0.0;
    double log_abs_det = 0.0;
    double bs_residual = 0.0;
};
std::vector<BSScanRow> bs_scan(const ExperimentConfig& cfg);
void write_bs_scan_csv(std::ostream& out, const std::vector<BSScanRow>& rows);

// Symbol values at a few |xi|, critical values and sigma(H0) as text.
void write_symbol_table(std::ostream& out, const SymbolSpec& spec);

struct ExperimentOutcome {
    int exit_code = 0;   // 0 ok, 1 some FAIL, 2 invalid config, 3 compute failure
    std::string message;
    std::filesystem::path directory;
    std::vector<BoundCertificate> certificates;
};

// Output root: the CERTLAB_OUT environment variable, else ./certlab-out.
std::filesystem::path default_output_root();

// Runs the configured theorems (or only `only` when given) and writes
// certificates.json, summary.csv, summary.md, spectrum.csv and norms.csv into
// a fresh timestamped directory below out_root.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_root,
                                 const std::vector<std::string>& only = {});

}  // namespace nsa
