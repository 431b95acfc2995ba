#pragma once

#include <optional>
#include <vector>

#include "epsim/complex_matrix.hpp"
#include "epsim/field.hpp"

namespace epsim {

// 2x2 Pauli matrices (textbook convention) and the chart rotation
// R = exp(+i*pi*sigma_x/4) that maps the complex-symmetric single-qubit chart
// onto the sigma_x/sigma_y field representation.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix chart_rotation();

using Couplings = std::vector<std::vector<double>>;

// Qubit k acts on the k-th tensor factor from the left, i.e. bit (N-k) of the
// basis index; index bit 0 <-> sigma_z = +1.
ComplexMatrix single_site(const ComplexMatrix& op, int qubit, int n_qubits);

// Sum over k of (B_x^k sigma_x^k + B_y^k sigma_y^k) plus the ZZ interaction.
// `couplings_override` replaces the config couplings (used for the
// time-modulated J_kl(t)); it must be symmetric with zero diagonal.
ComplexMatrix build_nhh(const SystemConfig& config, const FieldPoint& point,
                        const std::optional<Couplings>& couplings_override = std::nullopt);

// build_nhh plus epsilon * sigma_z on qubit 1.
ComplexMatrix build_perturbed_nhh(const SystemConfig& config, const FieldPoint& point,
                                  const std::optional<Couplings>& couplings_override,
                                  double epsilon);

// Metric operator eta = tensor_k xi, with xi assembled from the biorthonormal
// single-qubit left eigenvectors. Hermitian and positive definite away from
// the EP; throws IllConditionedMetricError when the single-qubit eigenvectors
// have coalesced beyond 1 - 1e-10 overlap.
ComplexMatrix build_metric(const SystemConfig& config, const FieldPoint& point);

// Cached Pauli-string term matrices for fast H(t) assembly along a schedule:
// H(t) = sum_k Bx_k(t) X_k + By_k(t) Y_k + sum_{k<l} J_kl(t) Z_kl.
class HamiltonianTerms {
public:
    explicit HamiltonianTerms(const SystemConfig& config);

    // Assembles into `out` (resized if needed).
    void assemble(const FieldPoint& point, const Couplings& couplings, double epsilon,
                  ComplexMatrix& out) const;

    int dim() const { return dim_; }

private:
    int n_qubits_;
    int dim_;
    std::vector<ComplexMatrix> x_ops_;            // per qubit
    std::vector<ComplexMatrix> y_ops_;            // per qubit
    std::vector<std::vector<double>> zz_diag_;    // per pair (k<l), diagonal of sigma_z^k sigma_z^l
    std::vector<std::pair<int, int>> pairs_;
    std::vector<double> z1_diag_;                 // diagonal of sigma_z^1
};

}  // namespace epsim
