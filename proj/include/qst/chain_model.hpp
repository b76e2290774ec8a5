// chain_model.hpp — single-excitation-sector Hamiltonians for XY spin chains.
//
// A chain of N spins with nearest-neighbor XY couplings conserves the total
// excitation number, so free dynamics of one excitation reduces to an N×N
// real symmetric matrix H1.  ChainSpec stores the single-excitation hopping
// elements directly: couplings[i] is the matrix element <i+1|H1|i+2>.  For a
// Hamiltonian written as (J/2)·Σ(σxσx+σyσy) the hopping element is J; for
// J·Σ(σxσx+σyσy) it is 2J.  Fields B_n enter the diagonal as 2·B_n with the
// ground (all-down) energy fixed at zero.
//
// All transition amplitudes f_{m,n}(t) = <m|exp(-i·H1·t)|n> are evaluated
// through the spectral sum Σ_k V_mk V_nk exp(-i·E_k·t).  Natural units
// ħ = 1 throughout; energies in units of the hopping element.  All measured
// probabilities are invariant under a global sign flip of H1.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qst {

using Complex = std::complex<double>;

/// Orthogonality / reconstruction tolerance for spectral decompositions.
inline constexpr double kSpectralTol = 1e-10;

/// One chain configuration: length, hopping elements, local fields.
/// Site 1 is the A-spin currently wired to the chain, site N is Bob.
struct ChainSpec {
    int length = 0;                  // N >= 2
    std::vector<double> couplings;   // N-1 entries, strictly positive
    std::vector<double> fields;      // N entries, default zero

    static ChainSpec uniform(int n, double hopping = 1.0);

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;

    double mean_coupling() const;
};

/// Uniform distribution of couplings over [J0(1-delta), J0(1+delta)].
struct DisorderModel {
    double base_coupling = 1.0;   // J0 > 0
    double spread = 0.0;          // delta in [0,1)
    std::uint64_t seed = 0;
};

/// Eigen-decomposition of H1.  Columns of eigenvectors are the modes.
struct SpectralData {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// H1 for the given spec: tridiagonal, off-diagonals = couplings,
/// diagonal = 2·fields.  Rejects N < 2 and nonpositive couplings.
Eigen::MatrixXd build_single_excitation_hamiltonian(const ChainSpec& spec);

/// Dense symmetric eigensolve.  Throws std::runtime_error if the solver
/// fails to converge.
SpectralData spectral_decompose(const Eigen::MatrixXd& h1);
SpectralData spectral_decompose(const ChainSpec& spec);

/// f_{m,n}(t) = <m|exp(-i·H1·t)|n>, 1-based site indices.
Complex propagator_amplitude(const SpectralData& sd, int m, int n, double t);

/// Full N×N propagator exp(-i·H1·t).
Eigen::MatrixXcd propagator(const SpectralData& sd, double t);

/// exp(-i·H1·t)·v without forming the matrix (two mat-vecs).
Eigen::VectorXcd propagate(const SpectralData& sd, const Eigen::VectorXcd& v,
                           double t);

/// Draws N-1 independent couplings from the disorder model; fields zero.
/// Deterministic for a fixed seed.  Rejects spread outside [0,1).
ChainSpec sample_random_chain(const DisorderModel& dm, int n);

/// Closed-form uniform-chain spectrum: E_k = 2·J·cos(kπ/(N+1)), k = 1..N.
double uniform_chain_eigenvalue(int n, double hopping, int k);

/// Closed-form uniform-chain amplitude
///   f_{m,n}(t) = (2/(N+1)) Σ_k sin(πkm/(N+1)) sin(πkn/(N+1)) e^{-i·E_k·t}.
/// Independent of the matrix route; used as a cross-check.
Complex uniform_chain_amplitude(int n, double hopping, int m, int site,
                                double t);

}  // namespace qst
