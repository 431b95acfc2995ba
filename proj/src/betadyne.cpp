#include "epsim/betadyne.hpp"

#include "epsim/errors.hpp"
#include "epsim/hamiltonian.hpp"

namespace epsim {

namespace {

const cplx kI(0.0, 1.0);

ComplexMatrix annihilation() {
    // Basis order matches the spin convention: |0> (vacuum) = sigma_z = +1.
    ComplexMatrix a(2);
    a.at(0, 1) = 1.0;
    return a;
}

ComplexMatrix number_op() {
    ComplexMatrix n(2);
    n.at(1, 1) = 1.0;
    return n;
}

}  // namespace

BetadyneParams map_to_betadyne(const SystemConfig& config, const FieldPoint& point, double gamma) {
    if (gamma <= 0.0) throw ConfigError("map_to_betadyne: gamma must be positive");
    config.validate();
    const int n = config.n_qubits;
    BetadyneParams out;
    out.gamma = gamma;
    out.detunings.resize(n);
    out.kerr.assign(n, std::vector<double>(n, 0.0));
    out.displacements.resize(n);
    out.drives.resize(n);
    for (int i = 0; i < n; ++i) {
        double pair_sum = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) pair_sum += config.couplings[i][j];
        out.detunings[i] = cplx(-2.0 * pair_sum, 0.5 * gamma);
        out.displacements[i] =
            -2.0 * cplx(point.b_x[i].imag(), point.b_y[i].imag()) / gamma;
        out.drives[i] = point.b_x[i] + kI * point.b_y[i];
        for (int j = 0; j < n; ++j) out.kerr[i][j] = 4.0 * config.couplings[i][j];
    }
    return out;
}

void betadyne_fields(const BetadyneParams& params, std::vector<cplx>& b_x, std::vector<cplx>& b_y) {
    const int n = static_cast<int>(params.drives.size());
    b_x.resize(n);
    b_y.resize(n);
    for (int k = 0; k < n; ++k) {
        const cplx gb = params.gamma * params.displacements[k];
        const double im_bx = -0.5 * gb.real();
        const double im_by = -0.5 * gb.imag();
        // drives = (Re Bx - Im By) + i (Im Bx + Re By)
        const double re_bx = params.drives[k].real() + im_by;
        const double re_by = params.drives[k].imag() - im_bx;
        b_x[k] = cplx(re_bx, im_bx);
        b_y[k] = cplx(re_by, im_by);
    }
}

ComplexMatrix build_betadyne_nhh(const BetadyneParams& params, const SystemConfig& config) {
    const int n = config.n_qubits;
    const int dim = config.dim();
    const ComplexMatrix a2 = annihilation();
    const ComplexMatrix n2 = number_op();

    std::vector<ComplexMatrix> a_ops, n_ops;
    for (int k = 1; k <= n; ++k) {
        a_ops.push_back(single_site(a2, k, n));
        n_ops.push_back(single_site(n2, k, n));
    }

    ComplexMatrix h(dim);
    for (int i = 0; i < n; ++i) h.add_scaled(params.detunings[i], n_ops[i]);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            if (params.kerr[j][k] == 0.0) continue;
            h.add_scaled(params.kerr[j][k], n_ops[j] * n_ops[k]);
        }
    for (int i = 0; i < n; ++i) {
        h.add_scaled(std::conj(params.drives[i]), a_ops[i]);
        h.add_scaled(params.drives[i], a_ops[i].adjoint());
    }
    // Displaced-detection terms, assembled literally.
    for (int i = 0; i < n; ++i) {
        const cplx beta = params.displacements[i];
        const cplx factor = -kI * 0.5 * params.gamma;
        h.add_scaled(factor * std::conj(beta), a_ops[i]);
        h.add_scaled(-factor * beta, a_ops[i].adjoint());
        ComplexMatrix shifted = a_ops[i];
        shifted.add_scaled(beta, ComplexMatrix::identity(dim));
        h.add_scaled(factor, shifted.adjoint() * shifted);
    }
    return h;
}

}  // namespace epsim
