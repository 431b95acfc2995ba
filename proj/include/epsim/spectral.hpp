#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "epsim/complex_matrix.hpp"
#include "epsim/eigensolver.hpp"
#include "epsim/field.hpp"
#include "epsim/hamiltonian.hpp"

namespace epsim {

// Closed-form single-qubit eigenpair: psi1 = R*(-sin(phi/2), cos(phi/2)) with
// energy -alpha, psi2 = R*(cos(phi/2), sin(phi/2)) with energy +alpha, where
// R is the chart rotation. Vectors carry the literal (unnormalized) formula
// values; alpha is recovered from phi through cot(phi) = x + i*y.
struct SingleQubitEigenpair {
    cvector psi1, psi2;
    double e1 = 0.0, e2 = 0.0;
};
SingleQubitEigenpair single_qubit_eigenpair(cplx phi);

// Tensor products of the single-qubit eigenvectors, ordered by their
// noninteracting energies (ascending, lexicographic tie-break). Used as the
// deterministic label basis inside degenerate clusters.
std::vector<cvector> analytic_product_basis(const SystemConfig& config, const FieldPoint& point);

// Builds the NHH at a control point and solves it, labeling degenerate
// clusters against the analytic product basis (or the continuity hint).
EigenSystem eigensystem_at(const SystemConfig& config, const FieldPoint& point,
                           const std::optional<Couplings>& couplings_override = std::nullopt,
                           const EigenSystem* hint = nullptr);

// Riemann-sheet samples over an (x, y) grid.
struct SheetGrid {
    std::vector<double> x_samples;
    std::vector<double> y_samples;
    // energies[(ix*ny + iy)*dim + sheet], ascending in sheet; meaningless when masked
    std::vector<double> energies;
    std::vector<bool> mask;
    int dim = 0;

    double energy(int ix, int iy, int sheet) const {
        return energies[(static_cast<std::size_t>(ix) * y_samples.size() + iy) * dim + sheet];
    }
    bool masked(int ix, int iy) const {
        return mask[static_cast<std::size_t>(ix) * y_samples.size() + iy];
    }
};

SheetGrid sheet_grid(const SystemConfig& config, std::pair<double, double> x_range,
                     std::pair<double, double> y_range, int resolution,
                     double couplings_scale = 1.0, int threads = 1);

// Sheet pairs that exchange across the branch cut x = 0 at y_probe > 1,
// matched by chained eigenvector continuity from -region to +region with the
// innermost comparison at x = +-delta (symmetry-protected exact crossings
// next to the cut belong to the exchange). 1-based sheet indices; throws
// AmbiguousPairingError when any chained overlap falls below 0.9.
std::vector<std::pair<int, int>> branch_cut_couplings(
    const SystemConfig& config, double y_probe,
    const std::optional<Couplings>& couplings_override = std::nullopt, double delta = 1e-3,
    double region = 1.0);

// The 3x3 extension whose ordinary second-order EP at (0, 1) projects onto
// the diverging single-qubit spectrum; Delta is a free real parameter.
struct Extended3x3 {
    double delta = 0.0;
    ComplexMatrix matrix;
    std::vector<cplx> eigenvalues;  // closed form: +g/sin(phi), -g/sin(phi), sin(Im phi)/sin(phi)
};
Extended3x3 extended_3x3(double x, double y, double delta);

}  // namespace epsim
