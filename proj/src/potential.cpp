#include "nsa/potential.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "nsa/error.hpp"

namespace nsa {

namespace {

std::vector<double> resolve_center(const TorusGrid& grid, std::vector<double> center)
{
    if (center.empty())
        center.assign(grid.dim(), 0.0);
    if (static_cast<int>(center.size()) != grid.dim())
        throw InvalidArgument("potential centre has the wrong dimension");
    return center;
}

double distance_squared(const std::vector<double>& x, const std::vector<double>& c)
{
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        sum += (x[j] - c[j]) * (x[j] - c[j]);
    return sum;
}

cplx read_complex(const Json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2)
        return {j[0].get<double>(), j[1].get<double>()};
    throw InvalidArgument("complex values are written as a number or [re, im]");
}

Json write_complex(cplx z)
{
    return Json::array({z.real(), z.imag()});
}

}  // namespace

PotentialField gaussian_well(const TorusGrid& grid, cplx amplitude, double width,
                             std::vector<double> center, double cutoff)
{
    if (!(width > 0.0))
        throw InvalidArgument("gaussian width must be positive");
    center = resolve_center(grid, std::move(center));
    Vector values = Vector::Zero(grid.sites());
    for (long x = 0; x < grid.sites(); ++x) {
        const double envelope = std::exp(-distance_squared(grid.position(x), center) / (width * width));
        if (envelope >= cutoff)
            values[x] = amplitude * envelope;
    }
    return PotentialField::scalar(grid, std::move(values));
}

PotentialField step_well(const TorusGrid& grid, cplx amplitude, double radius, std::vector<double> center)
{
    if (!(radius > 0.0))
        throw InvalidArgument("step radius must be positive");
    center = resolve_center(grid, std::move(center));
    Vector values = Vector::Zero(grid.sites());
    for (long x = 0; x < grid.sites(); ++x) {
        if (distance_squared(grid.position(x), center) < radius * radius)
            values[x] = amplitude;
    }
    return PotentialField::scalar(grid, std::move(values));
}

PotentialField coulomb_regularized(const TorusGrid& grid, cplx amplitude, double softening,
                                   std::vector<double> center)
{
    if (!(softening > 0.0))
        throw InvalidArgument("coulomb softening must be positive");
    center = resolve_center(grid, std::move(center));
    Vector values(grid.sites());
    for (long x = 0; x < grid.sites(); ++x)
        values[x] = amplitude / std::sqrt(distance_squared(grid.position(x), center) + softening * softening);
    return PotentialField::scalar(grid, std::move(values));
}

PotentialField random_bumps(const TorusGrid& grid, const RandomBumpParams& params)
{
    if (params.bumps < 1)
        throw InvalidArgument("random potential needs at least one bump");
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double half = grid.length() / 4.0;
    Vector values = Vector::Zero(grid.sites());
    double peak = 0.0;
    for (int b = 0; b < params.bumps; ++b) {
        std::vector<double> c(grid.dim());
        for (auto& cj : c)
            cj = -half + 2.0 * half * unit(rng);
        const double re = params.re_lo + (params.re_hi - params.re_lo) * unit(rng);
        const double im = params.im_lo + (params.im_hi - params.im_lo) * unit(rng);
        values += gaussian_well(grid, {re, im}, params.width, c, 0.0).values();
        peak += std::abs(cplx(re, im));
    }
    for (long x = 0; x < grid.sites(); ++x) {
        if (std::abs(values[x]) < params.cutoff * peak)
            values[x] = 0.0;
    }
    return PotentialField::scalar(grid, std::move(values));
}

PotentialField make_potential(const TorusGrid& grid, const Json& family)
{
    const std::string name = family.at("name").get<std::string>();
    auto center = family.contains("center") ? family["center"].get<std::vector<double>>() : std::vector<double>{};
    const cplx amplitude = family.contains("amplitude") ? read_complex(family["amplitude"]) : cplx(-1.0, 0.0);
    if (name == "gaussian") {
        return gaussian_well(grid, amplitude, family.value("width", 1.0), center, family.value("cutoff", 1e-16));
    }
    if (name == "step")
        return step_well(grid, amplitude, family.value("radius", 1.0), center);
    if (name == "coulomb-regularized")
        return coulomb_regularized(grid, amplitude, family.value("softening", 1.0), center);
    if (name == "random") {
        RandomBumpParams p;
        p.seed = family.value("seed", std::uint64_t{1});
        p.bumps = family.value("bumps", 3);
        p.width = family.value("width", 1.0);
        if (family.contains("re"))
            std::tie(p.re_lo, p.re_hi) = std::pair(family["re"][0].get<double>(), family["re"][1].get<double>());
        if (family.contains("im"))
            std::tie(p.im_lo, p.im_hi) = std::pair(family["im"][0].get<double>(), family["im"][1].get<double>());
        p.cutoff = family.value("cutoff", 1e-16);
        return random_bumps(grid, p);
    }
    if (name == "zero")
        return PotentialField(grid, 1);
    throw InvalidArgument("unknown potential family '" + name + "'");
}

PotentialField dilate(const PotentialField& v, double t, double power)
{
    if (!(t > 0.0))
        throw InvalidArgument("dilation factor must be positive");
    const TorusGrid grid = v.grid().rescaled(1.0 / t);
    return PotentialField(grid, v.components(), std::pow(t, power) * v.values());
}

PotentialField fourier_resample(const PotentialField& v, const TorusGrid& target)
{
    const TorusGrid& src = v.grid();
    if (src.dim() != target.dim() || src.length() != target.length())
        throw GridMismatch("Fourier resampling needs the same dimension and side length");
    if (src.points() == target.points())
        return PotentialField(target, v.components(), v.values());
    const int m = v.components() * v.components();
    const int d = src.dim();
    const Vector spectrum = fourier_forward(src, m, v.values());
    Vector padded = Vector::Zero(target.sites() * m);
    const int half_src = src.points() / 2;
    const int half_dst = target.points() / 2;
    for (long k = 0; k < src.sites(); ++k) {
        const auto idx = src.multi_index(k);
        // a Nyquist index is split evenly between +-N/2 when padding
        std::vector<std::array<int, 3>> images{{0, 0, 0}};
        std::vector<double> weights{1.0};
        bool dropped = false;
        for (int j = 0; j < d; ++j) {
            const int f = src.frequency_index(idx[j]);
            std::vector<std::array<int, 3>> next;
            std::vector<double> next_w;
            for (std::size_t i = 0; i < images.size(); ++i) {
                auto push = [&](int freq, double w) {
                    auto img = images[i];
                    img[j] = freq < 0 ? freq + target.points() : freq;
                    next.push_back(img);
                    next_w.push_back(weights[i] * w);
                };
                if (f == -half_src && target.points() > src.points()) {
                    push(-half_src, 0.5);
                    push(half_src, 0.5);
                } else if (std::abs(f) >= half_dst && !(f == -half_dst)) {
                    dropped = true;
                } else {
                    push(f, 1.0);
                }
            }
            images = std::move(next);
            weights = std::move(next_w);
        }
        if (dropped)
            continue;
        for (std::size_t i = 0; i < images.size(); ++i) {
            const long dst = target.flat_index(images[i]);
            padded.segment(dst * m, m) += weights[i] * spectrum.segment(k * m, m);
        }
    }
    Vector values = fourier_backward(target, m, padded) / static_cast<double>(src.sites());
    return PotentialField(target, v.components(), std::move(values));
}

PotentialFile parse_potential(const Json& doc)
{
    const Json& g = doc.at("grid");
    TorusGrid grid(g.at("d").get<int>(), g.at("N").get<int>(), g.at("L").get<double>());
    const int n = doc.value("components", 1);
    if (doc.contains("family")) {
        PotentialField field = make_potential(grid, doc["family"]);
        if (n > 1)
            field = field.broadcast(n);
        return {grid, std::move(field), doc["family"]};
    }
    if (!doc.contains("table"))
        throw InvalidArgument("potential file needs a 'family' or a 'table' block");
    const Json& table = doc["table"];
    if (static_cast<long>(table.size()) != grid.sites())
        throw InvalidArgument("potential table has " + std::to_string(table.size()) + " rows, expected "
                              + std::to_string(grid.sites()));
    Vector values(grid.sites() * n * n);
    for (long x = 0; x < grid.sites(); ++x) {
        if (n == 1) {
            values[x] = read_complex(table[x]);
            continue;
        }
        const Json& row = table[x];
        if (static_cast<int>(row.size()) != n * n)
            throw InvalidArgument("matrix potential rows need n*n entries");
        for (int e = 0; e < n * n; ++e)
            values[x * n * n + e] = read_complex(row[e]);
    }
    return {grid, PotentialField(grid, n, std::move(values)), Json{{"name", "table"}}};
}

PotentialFile read_potential(std::istream& in)
{
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("potential file is not valid JSON: ") + e.what());
    }
    return parse_potential(doc);
}

PotentialFile load_potential(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open potential file '" + path + "'");
    return read_potential(in);
}

void write_potential_table(std::ostream& out, const PotentialField& v)
{
    const auto& grid = v.grid();
    const int n = v.components();
    Json doc;
    doc["grid"] = {{"d", grid.dim()}, {"N", grid.points()}, {"L", grid.length()}};
    doc["components"] = n;
    Json table = Json::array();
    for (long x = 0; x < grid.sites(); ++x) {
        if (n == 1) {
            table.push_back(write_complex(v.scalar_at(x)));
            continue;
        }
        Json row = Json::array();
        for (int e = 0; e < n * n; ++e)
            row.push_back(write_complex(v.values()[x * n * n + e]));
        table.push_back(row);
    }
    doc["table"] = table;
    out << doc.dump(1) << "\n";
}

}  // namespace nsa
