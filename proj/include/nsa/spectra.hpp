#pragma once

// Dense spectra of H0 + V on the torus and the refinement classifier that
// separates discrete eigenvalues from the discretized continuum.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsa/dense.hpp"
#include "nsa/lattice.hpp"

namespace nsa {

// T(D) + V as a dense N^d n square matrix.  Throws SizeCapExceeded.
Matrix assemble_hamiltonian(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v);

// Matrix-free H f.
GridFunction apply_hamiltonian(const SymbolSpec& spec, const TorusGrid& grid, const PotentialField& v,
                               const GridFunction& f);

Vector eigensolve(const Matrix& h);
dense::EigenDecomposition eigensolve_with_vectors(const Matrix& h, bool with_condition = true);

double dist_to_spectrum(const SymbolSpec& spec, cplx z);

enum class SpectralLabel { Discrete, ContinuumArtifact, Undecided };
std::string to_string(SpectralLabel label);

struct SpectralPoint {
    cplx z;
    double dist_sigma = 0.0;
    double drift = 0.0;       // |z - z'| / |z|, z' the nearest eigenvalue on the 2N grid
    SpectralLabel label = SpectralLabel::Undecided;
    double condition = 1.0;   // eigenvalue condition number on grid N
    double eta = 0.0;         // threshold used for this point
};

// 5 x the lattice level spacing around the projection of Re z onto sigma(H0).
double default_eta(const SymbolSpec& spec, const TorusGrid& grid, cplx z);

// Labels the N-grid eigenvalues using the 2N-grid spectrum.  `fine` must be
// grid.refined(2).  eta <= 0 selects default_eta per point.
std::vector<SpectralPoint> classify(const SymbolSpec& spec, const TorusGrid& grid, const Vector& eigs_n,
                                    const TorusGrid& fine, const Vector& eigs_2n, double eta = 0.0,
                                    const RealVector* conditions = nullptr);

// Samples a potential on any grid (used to rebuild V on the refined grid).
using PotentialFactory = std::function<PotentialField(const TorusGrid&)>;

struct SpectrumRun {
    TorusGrid grid;
    Vector eigenvalues;
    RealVector condition;
    std::vector<SpectralPoint> points;

    std::vector<SpectralPoint> discrete() const;
};

SpectrumRun compute_spectrum(const SymbolSpec& spec, const TorusGrid& grid, const PotentialFactory& potential,
                             double eta = 0.0);

// Header: re,im,dist_sigma,drift,label,cond
void write_spectrum_csv(std::ostream& out, const std::vector<SpectralPoint>& points);

}  // namespace nsa
