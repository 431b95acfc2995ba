#pragma once

#include <vector>

#include "epsim/complex_matrix.hpp"
#include "epsim/field.hpp"

namespace epsim {

// Driven Kerr-cavity parameters whose post-selected effective evolution
// reproduces the spin NHH in the single-photon truncation.
struct BetadyneParams {
    std::vector<cplx> detunings;            // Delta_i = -2 sum_{pairs with i} J + i*gamma/2
    std::vector<std::vector<double>> kerr;  // U_jk = 4 J_jk
    std::vector<cplx> displacements;        // beta_k: gamma*beta_k = -2(Im Bx_k + i Im By_k)
    std::vector<cplx> drives;               // eta_k = Bx_k + i By_k
    double gamma = 0.0;
};

// Throws ConfigError for gamma <= 0 (beta diverges).
BetadyneParams map_to_betadyne(const SystemConfig& config, const FieldPoint& point, double gamma);

// Inverts the linear relations back to the field components.
void betadyne_fields(const BetadyneParams& params, std::vector<cplx>& b_x, std::vector<cplx>& b_y);

// Literal assembly of the displaced effective Hamiltonian
//   H + drives - (i*gamma/2) [ (beta* a - beta a^H) + (a + beta)^H (a + beta) ]
// in the hard-core truncation (mode dimension 2); no algebraic simplification
// is applied, so the cancellation against the spin NHH is a genuine check.
ComplexMatrix build_betadyne_nhh(const BetadyneParams& params, const SystemConfig& config);

}  // namespace epsim
