#pragma once

// Closed-form potential families and the potential file format.
//
// A potential file is a JSON document:
//
//   { "grid": {"d": 1, "N": 256, "L": 30.0},
//     "components": 1,                                  (optional, default 1)
//     "family": {"name": "gaussian", "amplitude": [-3.0, 0.5], "width": 1.0} }
//
// or, instead of "family", a raw row-major table
//
//   "table": [[re, im], [re, im], ...]                  (n = 1)
//   "table": [[[re, im], ... n*n column-major], ...]    (n > 1)
//
// Families: gaussian, step, coulomb-regularized, random (seeded bumps).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsa/lattice.hpp"

namespace nsa {

using Json = nlohmann::ordered_json;

// A exp(-|x-c|^2/w^2), set to exactly zero where the envelope drops below
// `cutoff` (relative).  The hard zero gives the field compact support.
PotentialField gaussian_well(const TorusGrid& grid, cplx amplitude, double width,
                             std::vector<double> center = {}, double cutoff = 1e-16);

// A on the ball |x-c| < radius, zero elsewhere.
PotentialField step_well(const TorusGrid& grid, cplx amplitude, double radius,
                         std::vector<double> center = {});

// A / sqrt(|x-c|^2 + a^2).
PotentialField coulomb_regularized(const TorusGrid& grid, cplx amplitude, double softening,
                                   std::vector<double> center = {});

// Sum of `bumps` Gaussians of width w, centres uniform in the middle half of
// the box, amplitudes uniform in [re_lo, re_hi] + i[im_lo, im_hi].
struct RandomBumpParams {
    std::uint64_t seed = 1;
    int bumps = 3;
    double width = 1.0;
    double re_lo = -1.0, re_hi = 1.0;
    double im_lo = -1.0, im_hi = 1.0;
    double cutoff = 1e-16;
};
PotentialField random_bumps(const TorusGrid& grid, const RandomBumpParams& params);

// Field built from a family block ({"name": ..., params...}).
PotentialField make_potential(const TorusGrid& grid, const Json& family);

// t^power V(t x) sampled on the grid with side L/t; site values are the old
// ones times t^power, so the discrete family is exactly self-similar.
PotentialField dilate(const PotentialField& v, double t, double power);

// Trigonometric interpolation of a field onto a grid with the same d and L
// (zero-padding or truncating its spectrum; the Nyquist mode is split).
PotentialField fourier_resample(const PotentialField& v, const TorusGrid& target);

struct PotentialFile {
    TorusGrid grid;
    PotentialField field;
    Json descriptor;  // the family block, or {"name": "table"}
};

PotentialFile parse_potential(const Json& doc);
PotentialFile read_potential(std::istream& in);
PotentialFile load_potential(const std::string& path);
// Writes the field as a raw table document.
void write_potential_table(std::ostream& out, const PotentialField& v);

}  // namespace nsa
