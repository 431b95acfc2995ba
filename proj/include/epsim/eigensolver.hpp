#pragma once

#include <vector>

#include "epsim/complex_matrix.hpp"

namespace epsim {

// Full eigensystem of a dense complex matrix, sorted ascending by (Re, Im).
// Eigenvalues whose imaginary part falls below reality_tol * spectral radius
// are truncated to real; complex_spectrum is set when any survive truncation.
struct EigenSystem {
    int dim = 0;
    std::vector<double> eigenvalues;       // real parts, ascending
    std::vector<double> eigenvalues_imag;  // imaginary parts after truncation
    bool complex_spectrum = false;
    std::vector<cvector> right_vectors;    // unit Euclidean norm
    std::vector<cvector> left_vectors;     // unit Euclidean norm

    cplx value(int k) const { return {eigenvalues[k], eigenvalues_imag[k]}; }
    double max_abs_imag() const;
    double spectral_radius() const;
};

struct EigenOptions {
    int max_iterations = 500;      // QR iterations per eigenvalue
    double reality_tol = 1e-9;     // relative to spectral radius
    double degeneracy_tol = 1e-8;  // clustering threshold (times max(1, radius))
    bool compute_vectors = true;
    // Deterministic labeling inside degenerate clusters: vectors are assigned
    // to the positions of their best-overlap partners in this basis
    // (coordinate basis when empty).
    const std::vector<cvector>* label_basis = nullptr;
};

// Hessenberg reduction + implicitly restarted single-shift QR for the values,
// inverse iteration on the original matrix for the vectors. Ties within a
// degenerate cluster are broken by the continuity hint when given, else by
// overlap against the label basis. Throws NoConvergenceError past the
// iteration cap; requires dim <= 64.
EigenSystem eigensystem_sorted(const ComplexMatrix& h,
                               const EigenSystem* continuity_hint = nullptr,
                               const EigenOptions& opts = {});

// Eigenvalues only (same QR core), unsorted truncation-free complex values.
std::vector<cplx> eigenvalues_only(const ComplexMatrix& h, int max_iterations = 500);

// Cyclic complex Jacobi for Hermitian matrices: real ascending eigenvalues and
// an orthonormal eigenbasis. Independent of the QR path.
struct HermitianEigen {
    std::vector<double> eigenvalues;    // ascending
    std::vector<cvector> eigenvectors;  // orthonormal
};
HermitianEigen hermitian_eigensystem(const ComplexMatrix& a);

// Hermitian principal square root with negative eigenvalues clamped to zero.
ComplexMatrix sqrt_psd(const ComplexMatrix& a);

}  // namespace epsim
