#pragma once

#include <complex>
#include <vector>

#include "epsim/complex_matrix.hpp"

namespace epsim {

// Static system definition: qubit count, per-qubit field scales f_k and the
// symmetric ZZ coupling matrix with zero diagonal.
struct SystemConfig {
    int n_qubits = 1;
    std::vector<double> field_scales;           // length n_qubits
    std::vector<std::vector<double>> couplings; // n_qubits x n_qubits, symmetric, zero diagonal

    SystemConfig() = default;
    SystemConfig(int n, std::vector<double> f, std::vector<std::vector<double>> j);

    int dim() const { return 1 << n_qubits; }
    void validate() const;  // throws ConfigError on invariant violations
};

// Radius of the evaluation exclusion disk around the twisted EPs (0, +-1).
inline constexpr double kEpEvalRadius = 1e-6;
// Threshold below which |Im phi| triggers the series limit branch for alpha.
inline constexpr double kAlphaSeriesThreshold = 1e-9;

// Control-plane angle phi = arctan(1/(x+iy)), principal branch; the segment
// x = 0, |y| < 1 lies on the arctan cut and is evaluated as the x -> 0+ limit.
cplx compute_phi(double x, double y);

// Curvature alpha = y*sin(Re phi)/sin(Im phi) with the series limit branch on
// the Hermitian line. `divergent` is set inside the EP evaluation disk.
struct AlphaResult {
    double value = 0.0;
    bool divergent = false;
};
AlphaResult compute_alpha(double x, double y);

// Control point with the derived per-qubit complex field components.
struct FieldPoint {
    double x = 0.0;
    double y = 0.0;
    cplx phi;
    double alpha = 0.0;
    std::vector<cplx> b_x;  // per qubit, f_k * alpha * sin(phi)
    std::vector<cplx> b_y;  // per qubit, f_k * alpha * cos(phi)
};

// Throws DivergentFieldError inside the EP evaluation disk.
FieldPoint field_point(const SystemConfig& config, double x, double y);

}  // namespace epsim
