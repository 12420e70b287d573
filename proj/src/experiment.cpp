#include "nsa/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nsa/error.hpp"

namespace nsa {

const std::vector<std::string>& theorem_ids()
{
    static const std::vector<std::string> ids = {
        "main-sum",          "uniform-resolvent",        "schatten-scaling",       "individual-bounds",
        "imaginary-potential", "weighted-fractional",    "weighted-relativistic-s2", "weighted-relativistic",
        "weighted-massless-dirac", "weighted-massive-dirac"};
    return ids;
}

std::vector<cplx> RaySpec::points() const
{
    std::vector<cplx> out;
    for (int i = 0; i < samples; ++i) {
        const double f = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
        out.push_back(std::polar(r_min * std::pow(r_max / r_min, f), arg));
    }
    return out;
}

namespace {

const Json& require(const Json& block, const std::string& path, const char* key)
{
    if (!block.is_object() || !block.contains(key))
        throw ConfigError(path + "." + key, "missing");
    return block[key];
}

template <class T>
T read(const Json& j, const std::string& path)
{
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(path, "has the wrong type");
    }
}

double read_positive(const Json& j, const std::string& path)
{
    const double x = read<double>(j, path);
    if (!(x > 0.0) || !std::isfinite(x))
        throw ConfigError(path, "must be a positive number");
    return x;
}

void check_block_keys(const Json& block, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!block.is_object())
        throw ConfigError(path, "must be an object");
    for (const auto& item : block.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return item.key() == a; }))
            throw ConfigError(path + "." + item.key(), "unknown field");
    }
}

bool needs_q(const std::string& id)
{
    return id != "uniform-resolvent";
}

bool is_weighted(const std::string& id)
{
    return id.rfind("weighted-", 0) == 0;
}

void check_imaginary(const ExperimentConfig& cfg)
{
    const SymbolSpec& spec = cfg.spec;
    if (spec.kind != SymbolKind::FractionalLaplacian && spec.kind != SymbolKind::DiracMassless)
        throw ConfigError("operator.kind", "imaginary-potential needs fractional-laplacian or dirac-massless");
    const double d = spec.d;
    if (spec.s < d / (d + 1.0))
        throw ConfigError("operator.s", "imaginary-potential needs s >= d/(d+1)");
    const double q = *cfg.q;
    const double lo = 2.0 * spec.s < d ? d / (2.0 * spec.s) : 1.0;
    const bool strict = 2.0 * spec.s == d;
    if ((strict ? !(q > lo) : !(q >= lo)) || q > 0.5 * (d + 1.0))
        throw ConfigError("run.q", "outside the range of the imaginary-potential bound");
    const PotentialField w = cfg.potential.base();
    for (long x = 0; x < w.grid().sites(); ++x) {
        const Matrix m = w.at(x);
        const double scale = std::max(1.0, m.norm());
        if ((m - m.adjoint()).norm() > 1e-12 * scale)
            throw ConfigError("potential", "imaginary-potential needs a Hermitian W (real for scalar fields)");
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        if (es.eigenvalues().minCoeff() < -1e-12 * scale)
            throw ConfigError("potential", "imaginary-potential needs W >= 0");
    }
}

void check_weighted(const ExperimentConfig& cfg, const std::string& id)
{
    const SymbolKind k = cfg.spec.kind;
    const bool ok = (id == "weighted-fractional" && k == SymbolKind::FractionalLaplacian) ||
                    ((id == "weighted-relativistic-s2" || id == "weighted-relativistic") &&
                     k == SymbolKind::Relativistic) ||
                    (id == "weighted-massless-dirac" && k == SymbolKind::DiracMassless) ||
                    (id == "weighted-massive-dirac" && k == SymbolKind::DiracMassive);
    if (!ok)
        throw ConfigError("run.theorems", id + " does not apply to kind " + to_string(k));
    if (!(cfg.eps > 0.0))
        throw ConfigError("run.eps", "must be positive");
    if (cfg.alpha && !(*cfg.alpha >= schatten_exponent(cfg.spec, *cfg.q) - 1e-12))
        throw ConfigError("run.alpha", "below the Schatten exponent " +
                                           std::to_string(schatten_exponent(cfg.spec, *cfg.q)));
}

std::string timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

std::string csv_number(const std::optional<double>& x)
{
    if (!x)
        return "";
    std::ostringstream s;
    s << std::setprecision(17) << *x;
    return s.str();
}

std::string short_number(const std::optional<double>& x)
{
    if (!x)
        return "-";
    std::ostringstream s;
    s << std::setprecision(6) << *x;
    return s.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing and validation

ExperimentConfig ExperimentConfig::parse(const Json& doc, const std::filesystem::path& base_dir)
{
    ExperimentConfig cfg;
    cfg.source = doc;
    check_block_keys(doc, "config", {"operator", "grid", "potential", "run"});

    const Json& op = require(doc, "config", "operator");
    check_block_keys(op, "operator", {"kind", "s", "d"});
    SymbolKind kind;
    try {
        kind = symbol_kind_from_string(read<std::string>(require(op, "operator", "kind"), "operator.kind"));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("operator.kind", e.what());
    }
    if (kind == SymbolKind::Radial)
        throw ConfigError("operator.kind", "radial symbols are library-only");
    const int d = read<int>(require(op, "operator", "d"), "operator.d");
    const double s = op.contains("s") ? read<double>(op["s"], "operator.s") : 1.0;
    try {
        cfg.spec = SymbolSpec::make(kind, d, s);
    } catch (const Error& e) {
        throw ConfigError(op.contains("s") ? "operator.s" : "operator.d", e.what());
    }

    const Json& gb = require(doc, "config", "grid");
    check_block_keys(gb, "grid", {"N", "L", "refine", "site_cap"});
    const int n = read<int>(require(gb, "grid", "N"), "grid.N");
    const double l = read_positive(require(gb, "grid", "L"), "grid.L");
    const long cap = gb.contains("site_cap") ? read<long>(gb["site_cap"], "grid.site_cap") : kDefaultSiteCap;
    cfg.refine = gb.contains("refine") ? read<bool>(gb["refine"], "grid.refine") : true;
    try {
        cfg.grid = TorusGrid(d, n, l, cap);
    } catch (const Error& e) {
        throw ConfigError("grid.N", e.what());
    }

    const Json& pb = require(doc, "config", "potential");
    check_block_keys(pb, "potential", {"family", "file"});
    if (pb.contains("family") == pb.contains("file"))
        throw ConfigError("potential", "needs exactly one of 'family' or 'file'");
    if (pb.contains("family")) {
        cfg.potential = PotentialSource::family(cfg.grid, pb["family"], cfg.spec.n);
        try {
            cfg.potential.base();
        } catch (const Error& e) {
            throw ConfigError("potential.family", e.what());
        }
    } else {
        const std::string name = read<std::string>(pb["file"], "potential.file");
        std::optional<PotentialFile> loaded;
        try {
            loaded = load_potential((base_dir / name).string());
        } catch (const Error& e) {
            throw ConfigError("potential.file", e.what());
        }
        const PotentialFile& file = *loaded;
        if (!(file.grid == cfg.grid))
            throw ConfigError("potential.file", "grid differs from the grid block");
        PotentialField v = file.field;
        if (v.components() == 1 && cfg.spec.n > 1)
            v = v.broadcast(cfg.spec.n);
        if (v.components() != cfg.spec.n)
            throw ConfigError("potential.file", "component count does not match the operator");
        cfg.potential = PotentialSource::table(v, Json{{"file", name}, {"potential", file.descriptor}});
    }

    const Json& rb = require(doc, "config", "run");
    check_block_keys(rb, "run", {"theorems", "q", "alpha", "eps", "region", "ray", "p", "t_ladder", "seed", "workers",
                                 "record_runtime"});
    const Json& th = require(rb, "run", "theorems");
    if (!th.is_array() || th.empty())
        throw ConfigError("run.theorems", "must be a nonempty list");
    for (std::size_t i = 0; i < th.size(); ++i) {
        const std::string path = "run.theorems[" + std::to_string(i) + "]";
        const std::string id = read<std::string>(th[i], path);
        const auto& ids = theorem_ids();
        if (std::find(ids.begin(), ids.end(), id) == ids.end())
            throw ConfigError(path, "unknown theorem id '" + id + "'");
        if (std::find(cfg.theorems.begin(), cfg.theorems.end(), id) != cfg.theorems.end())
            throw ConfigError(path, "duplicate theorem id '" + id + "'");
        cfg.theorems.push_back(id);
    }
    if (rb.contains("q"))
        cfg.q = read_positive(rb["q"], "run.q");
    if (rb.contains("alpha"))
        cfg.alpha = read_positive(rb["alpha"], "run.alpha");
    if (rb.contains("eps"))
        cfg.eps = read<double>(rb["eps"], "run.eps");
    if (rb.contains("p"))
        cfg.p = read_positive(rb["p"], "run.p");
    if (rb.contains("region")) {
        try {
            cfg.region = Region::from_json(rb["region"]);
        } catch (const Error& e) {
            throw ConfigError("run.region", e.what());
        }
    }
    if (rb.contains("ray")) {
        const Json& ray = rb["ray"];
        check_block_keys(ray, "run.ray", {"arg", "r_min", "r_max", "samples", "branch"});
        RaySpec r;
        r.arg = read<double>(require(ray, "run.ray", "arg"), "run.ray.arg");
        r.r_min = read_positive(require(ray, "run.ray", "r_min"), "run.ray.r_min");
        r.r_max = read_positive(require(ray, "run.ray", "r_max"), "run.ray.r_max");
        r.samples = read<int>(require(ray, "run.ray", "samples"), "run.ray.samples");
        if (ray.contains("branch")) {
            const auto b = read<std::string>(ray["branch"], "run.ray.branch");
            if (b != "s" && b != "l")
                throw ConfigError("run.ray.branch", "must be 's' or 'l'");
            r.branch = b[0];
        }
        if (!(r.r_max > r.r_min))
            throw ConfigError("run.ray.r_max", "must exceed r_min");
        cfg.ray = r;
    }
    if (rb.contains("t_ladder")) {
        const Json& t = rb["t_ladder"];
        check_block_keys(t, "run.t_ladder", {"t_min", "t_max", "ratio"});
        if (t.contains("t_min"))
            cfg.t_min = read_positive(t["t_min"], "run.t_ladder.t_min");
        if (t.contains("t_max"))
            cfg.t_max = read_positive(t["t_max"], "run.t_ladder.t_max");
        if (t.contains("ratio"))
            cfg.t_ratio = read_positive(t["ratio"], "run.t_ladder.ratio");
        if (!(cfg.t_max > cfg.t_min))
            throw ConfigError("run.t_ladder.t_max", "must exceed t_min");
        if (!(cfg.t_ratio > 1.0))
            throw ConfigError("run.t_ladder.ratio", "must exceed 1");
    }
    if (rb.contains("seed"))
        cfg.seed = read<std::uint64_t>(rb["seed"], "run.seed");
    if (rb.contains("workers")) {
        cfg.workers = read<int>(rb["workers"], "run.workers");
        if (cfg.workers < 1)
            throw ConfigError("run.workers", "must be at least 1");
    }
    if (rb.contains("record_runtime"))
        cfg.record_runtime = read<bool>(rb["record_runtime"], "run.record_runtime");

    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", "cannot open '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("not valid JSON: ") + e.what());
    }
    return parse(doc, std::filesystem::path(path).parent_path());
}

void ExperimentConfig::validate() const
{
    const double d = spec.d;
    for (const auto& id : theorems) {
        if (needs_q(id)) {
            if (!q)
                throw ConfigError("run.q", "required by " + id);
            if (id == "individual-bounds") {
                if (*q < d / spec.s - 1e-12)
                    throw ConfigError("run.q", "violates q >= d/s of the individual bounds");
            } else if (id != "imaginary-potential") {
                const RegimeCheck rc = check_regime(spec, *q);
                if (!rc.ok)
                    throw ConfigError("run.q", rc.message);
            }
        }
        if (id == "main-sum" || id == "uniform-resolvent") {
            if (!region)
                throw ConfigError("run.region", "required by " + id);
            try {
                region->validate(spec);
            } catch (const Error& e) {
                throw ConfigError("run.region", e.what());
            }
        }
        if (id == "uniform-resolvent") {
            const auto [lo, hi] = uniform_p_range(spec);
            if (lo <= hi) {
                if (!p)
                    throw ConfigError("run.p", "required by uniform-resolvent");
                if (*p < lo - 1e-12 || *p > hi + 1e-12)
                    throw ConfigError("run.p", "outside the admissible range [" + std::to_string(lo) + ", " +
                                                   std::to_string(hi) + "]");
            }
        }
        if (id == "schatten-scaling") {
            if (!ray)
                throw ConfigError("run.ray", "required by schatten-scaling");
            if (ray->samples < 8)
                throw ConfigError("run.ray.samples", "scaling fits need at least 8 samples");
            for (const cplx z : ray->points())
                if (essential_spectrum(spec).distance(z) == 0.0)
                    throw ConfigError("run.ray.arg", "the ray meets sigma(H0)");
        }
        if (id == "imaginary-potential")
            check_imaginary(*this);
        if (is_weighted(id))
            check_weighted(*this, id);
    }
}

// ---------------------------------------------------------------------------
// Running

BoundCertificate run_theorem(const ExperimentConfig& cfg, const std::string& theorem)
{
    if (theorem == "main-sum") {
        MainOptions opt;
        opt.t_min = cfg.t_min;
        opt.t_max = cfg.t_max;
        opt.ladder_ratio = cfg.t_ratio;
        opt.seed = cfg.seed;
        return verify_main(cfg.spec, cfg.potential, *cfg.region, *cfg.q, opt);
    }
    if (theorem == "uniform-resolvent") {
        UniformOptions opt;
        opt.seed = cfg.seed;
        return verify_uniform_resolvent(cfg.spec, cfg.grid, *cfg.region, cfg.p.value_or(1.0), opt);
    }
    if (theorem == "schatten-scaling") {
        SchattenOptions opt;
        opt.branch = cfg.ray->branch;
        return verify_schatten_scaling(cfg.spec, cfg.potential, *cfg.q, cfg.ray->points(), opt);
    }
    if (theorem == "individual-bounds")
        return verify_individual_bounds(cfg.spec, cfg.potential, *cfg.q);
    if (theorem == "imaginary-potential") {
        ImaginaryOptions opt;
        opt.seed = cfg.seed;
        return verify_imaginary(cfg.spec, cfg.potential, *cfg.q, opt);
    }
    if (is_weighted(theorem)) {
        WeightedOptions opt;
        opt.ladder_ratio = cfg.t_ratio;
        opt.t_start = cfg.t_min;
        const double alpha = cfg.alpha.value_or(schatten_exponent(cfg.spec, *cfg.q));
        return verify_weighted_sums(theorem, cfg.spec, cfg.potential, *cfg.q, alpha, cfg.eps, opt);
    }
    throw InvalidArgument("unknown theorem id '" + theorem + "'");
}

std::vector<SpectralPoint> config_spectrum(const ExperimentConfig& cfg)
{
    if (cfg.refine)
        return compute_spectrum(cfg.spec, cfg.grid, cfg.potential.factory).points;
    std::vector<SpectralPoint> out;
    for (const cplx z : eigensolve(assemble_hamiltonian(cfg.spec, cfg.grid, cfg.potential.base()))) {
        SpectralPoint p;
        p.z = z;
        p.dist_sigma = dist_to_spectrum(cfg.spec, z);
        p.drift = std::nan("");
        out.push_back(p);
    }
    return out;
}

std::vector<BSScanRow> bs_scan(const ExperimentConfig& cfg)
{
    if (!cfg.ray)
        throw ConfigError("run.ray", "required by the bs scan");
    if (!cfg.q && !cfg.alpha)
        throw ConfigError("run.q", "the bs scan needs q or alpha");
    const double alpha = cfg.alpha.value_or(cfg.q ? schatten_exponent(cfg.spec, *cfg.q) : 2.0);
    const int order = det_order(alpha);
    const PotentialField v = cfg.potential.base();
    std::vector<BSScanRow> rows;
    for (const cplx z : cfg.ray->points()) {
        const BSOperator m = assemble_bs(cfg.spec, cfg.grid, v, z);
        BSScanRow r;
        r.z = z;
        r.schatten = schatten_norm(m, alpha).norm;
        r.op_norm = m.operator_norm();
        r.log_abs_det = regularized_det(m, order).log_abs;
        r.bs_residual = bs_principle_check(m);
        rows.push_back(r);
    }
    return rows;
}

void write_bs_scan_csv(std::ostream& out, const std::vector<BSScanRow>& rows)
{
    out << "re,im,abs_z,schatten,op_norm,log_abs_det,bs_residual\n" << std::setprecision(17);
    for (const auto& r : rows)
        out << r.z.real() << ',' << r.z.imag() << ',' << std::abs(r.z) << ',' << r.schatten << ',' << r.op_norm
            << ',' << r.log_abs_det << ',' << r.bs_residual << '\n';
}

void write_symbol_table(std::ostream& out, const SymbolSpec& spec)
{
    out << "kind " << to_string(spec.kind) << ", d = " << spec.d << ", s = " << spec.s << ", n = " << spec.n
        << "\n\n|xi|        eigenvalues of T(xi)\n";
    for (double r : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        std::vector<double> xi(spec.d, 0.0);
        xi[0] = r;
        out << std::left << std::setw(12) << r;
        for (double e : symbol_eigenvalues(spec, xi))
            out << ' ' << std::setw(12) << e + 0.0;
        out << '\n';
    }
    out << "\ncritical values:";
    const auto crit = critical_values(spec).values;
    if (crit.empty())
        out << " none";
    for (double c : crit)
        out << ' ' << c;
    out << "\nsigma(H0):";
    for (const auto& iv : essential_spectrum(spec).intervals)
        out << " [" << iv.lo << ", " << iv.hi << "]";
    out << '\n';
}

// ---------------------------------------------------------------------------
// Reports

void emit_report(std::ostream& out, const std::vector<BoundCertificate>& certs, ReportFormat format)
{
    if (certs.empty())
        throw InvalidArgument("report needs at least one certificate");
    switch (format) {
    case ReportFormat::Json: {
        Json arr = Json::array();
        for (const auto& c : certs)
            arr.push_back(to_json(c));
        out << arr.dump(2) << '\n';
        break;
    }
    case ReportFormat::Csv:
        out << "theorem,verdict,lhs,rhs,constant,seed,d,N,L,runtime_s\n";
        for (const auto& c : certs)
            out << c.theorem << ',' << to_string(c.verdict) << ',' << csv_number(c.lhs) << ',' << csv_number(c.rhs)
                << ',' << csv_number(c.constant) << ',' << c.seed << ',' << c.grid.dim() << ',' << c.grid.points()
                << ',' << csv_number(c.grid.length()) << ',' << csv_number(c.runtime_s) << '\n';
        break;
    case ReportFormat::Markdown: {
        int pass = 0, fail = 0, report = 0;
        out << "| theorem | verdict | lhs | rhs | constant |\n|---|---|---|---|---|\n";
        for (const auto& c : certs) {
            out << "| " << c.theorem << " | " << to_string(c.verdict) << " | " << short_number(c.lhs) << " | "
                << short_number(c.rhs) << " | " << short_number(c.constant) << " |\n";
            (c.verdict == Verdict::Pass ? pass : c.verdict == Verdict::Fail ? fail : report)++;
        }
        out << "\nPASS " << pass << ", FAIL " << fail << ", REPORT-ONLY " << report << " (" << certs.size()
            << " certificates)\n";
        break;
    }
    }
}

void emit_report(const std::filesystem::path& file, const std::vector<BoundCertificate>& certs, ReportFormat format)
{
    std::ofstream out(file);
    if (!out)
        throw Error("cannot write '" + file.string() + "'");
    emit_report(out, certs, format);
    if (!out)
        throw Error("write to '" + file.string() + "' failed");
}

std::filesystem::path default_output_root()
{
    if (const char* env = std::getenv("CERTLAB_OUT"); env && *env)
        return env;
    return "certlab-out";
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_root,
                                 const std::vector<std::string>& only)
{
    ExperimentOutcome outcome;
    std::vector<std::string> ids = only.empty() ? cfg.theorems : only;
    for (const auto& id : ids) {
        const auto& known = theorem_ids();
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            outcome.exit_code = 2;
            outcome.message = "run.theorems: unknown theorem id '" + id + "'";
            return outcome;
        }
    }
    if (!only.empty()) {
        ExperimentConfig sub = cfg;
        sub.theorems = ids;
        try {
            sub.validate();
        } catch (const ConfigError& e) {
            outcome.exit_code = 2;
            outcome.message = e.what();
            return outcome;
        }
    }

    std::vector<Job> jobs;
    for (const auto& id : ids) {
        jobs.push_back(Job{id, [&cfg, id] {
                               const auto t0 = std::chrono::steady_clock::now();
                               BoundCertificate c = run_theorem(cfg, id);
                               if (cfg.record_runtime)
                                   c.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                                     .count();
                               return c;
                           }});
    }
    const auto results = run_jobs(std::move(jobs), cfg.workers);

    std::filesystem::path dir = out_root / ("run-" + timestamp());
    for (int i = 1; std::filesystem::exists(dir); ++i)
        dir = out_root / ("run-" + timestamp() + "-" + std::to_string(i));
    std::filesystem::create_directories(dir);
    outcome.directory = dir;

    for (const auto& r : results) {
        if (r.certificate) {
            outcome.certificates.push_back(*r.certificate);
        } else if (outcome.exit_code != 3) {
            outcome.exit_code = 3;
            outcome.message = "job " + r.id + " failed: " + r.error;
        }
    }

    try {
        std::ofstream spectrum(dir / "spectrum.csv");
        write_spectrum_csv(spectrum, config_spectrum(cfg));
    } catch (const Error& e) {
        if (outcome.exit_code != 3) {
            outcome.exit_code = 3;
            outcome.message = std::string("job spectrum failed: ") + e.what();
        }
    }

    if (!outcome.certificates.empty()) {
        emit_report(dir / "certificates.json", outcome.certificates, ReportFormat::Json);
        emit_report(dir / "summary.csv", outcome.certificates, ReportFormat::Csv);
        emit_report(dir / "summary.md", outcome.certificates, ReportFormat::Markdown);
        std::ofstream norms(dir / "norms.csv");
        norms << "theorem,re,im,abs_z,norm\n" << std::setprecision(17);
        for (const auto& c : outcome.certificates) {
            const char* key = c.theorem == "schatten-scaling" ? "samples"
                              : c.theorem == "uniform-resolvent" ? "scan"
                                                                 : nullptr;
            if (!key || !c.diagnostics.contains(key))
                continue;
            for (const auto& row : c.diagnostics[key]) {
                const double re = row["z"][0], im = row["z"][1];
                const Json& val = row.contains("ratio") ? row["ratio"] : row["norm"];
                norms << c.theorem << ',' << re << ',' << im << ',' << std::hypot(re, im) << ','
                      << (val.is_number() ? val.dump() : val.get<std::string>()) << '\n';
            }
        }
    }

    if (outcome.exit_code == 0) {
        const bool failed = std::any_of(outcome.certificates.begin(), outcome.certificates.end(),
                                        [](const BoundCertificate& c) { return c.verdict == Verdict::Fail; });
        outcome.exit_code = failed ? 1 : 0;
        outcome.message = failed ? "some certificates FAIL" : "ok";
    }
    return outcome;
}

}  // namespace nsa
