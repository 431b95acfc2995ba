#include "epsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epsim/errors.hpp"

namespace epsim {

namespace {

const cplx kI(0.0, 1.0);

void check_override(const SystemConfig& config, const Couplings& j) {
    const int n = config.n_qubits;
    if (static_cast<int>(j.size()) != n)
        throw ConfigError("couplings override must be n_qubits x n_qubits");
    for (int k = 0; k < n; ++k) {
        if (static_cast<int>(j[k].size()) != n)
            throw ConfigError("couplings override must be n_qubits x n_qubits");
        if (j[k][k] != 0.0) throw ConfigError("couplings override diagonal must be zero");
        for (int l = 0; l < n; ++l)
            if (j[k][l] != j[l][k]) throw ConfigError("couplings override must be symmetric");
    }
}

}  // namespace

ComplexMatrix pauli_x() {
    ComplexMatrix m(2);
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2);
    m.at(0, 1) = -kI;
    m.at(1, 0) = kI;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2);
    m.at(0, 0) = 1.0;
    m.at(1, 1) = -1.0;
    return m;
}

ComplexMatrix chart_rotation() {
    // exp(+i*pi*sigma_x/4) = (I + i*sigma_x)/sqrt(2)
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix m(2);
    m.at(0, 0) = r;
    m.at(0, 1) = kI * r;
    m.at(1, 0) = kI * r;
    m.at(1, 1) = r;
    return m;
}

ComplexMatrix single_site(const ComplexMatrix& op, int qubit, int n_qubits) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (int k = 1; k <= n_qubits; ++k)
        out = kron(out, k == qubit ? op : ComplexMatrix::identity(2));
    return out;
}

ComplexMatrix build_nhh(const SystemConfig& config, const FieldPoint& point,
                        const std::optional<Couplings>& couplings_override) {
    config.validate();
    if (couplings_override) check_override(config, *couplings_override);
    const Couplings& j = couplings_override ? *couplings_override : config.couplings;
    const int n = config.n_qubits;
    ComplexMatrix h(config.dim());
    for (int k = 1; k <= n; ++k) {
        h.add_scaled(point.b_x[k - 1], single_site(pauli_x(), k, n));
        h.add_scaled(point.b_y[k - 1], single_site(pauli_y(), k, n));
    }
    for (int k = 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
            if (j[k - 1][l - 1] == 0.0) continue;
            h.add_scaled(j[k - 1][l - 1],
                         single_site(pauli_z(), k, n) * single_site(pauli_z(), l, n));
        }
    return h;
}

ComplexMatrix build_perturbed_nhh(const SystemConfig& config, const FieldPoint& point,
                                  const std::optional<Couplings>& couplings_override,
                                  double epsilon) {
    ComplexMatrix h = build_nhh(config, point, couplings_override);
    if (epsilon != 0.0) h.add_scaled(epsilon, single_site(pauli_z(), 1, config.n_qubits));
    return h;
}

ComplexMatrix build_metric(const SystemConfig& config, const FieldPoint& point) {
    // Single-qubit chart eigenvectors m1 = (-sin(phi/2), cos(phi/2)),
    // m2 = (cos(phi/2), sin(phi/2)) are bilinearly orthonormal; the left
    // eigenvectors of the field term are R*conj(m_i), and
    // xi = sum_i |nu_i><nu_i| is the single-qubit metric. The field direction
    // is qubit-independent, so eta = xi^(tensor N).
    const cplx half = point.phi / 2.0;
    const cplx s = std::sin(half), c = std::cos(half);
    const double overlap = std::abs(std::tanh(point.phi.imag()));
    if (overlap > 1.0 - 1e-10)
        throw IllConditionedMetricError("build_metric: eigenvectors coalesced (overlap " +
                                        std::to_string(overlap) + ")");
    const ComplexMatrix r = chart_rotation();
    const cvector m1 = {-std::conj(s), std::conj(c)};
    const cvector m2 = {std::conj(c), std::conj(s)};
    auto rotate = [&r](const cvector& v) {
        cvector out(2);
        out[0] = r.at(0, 0) * v[0] + r.at(0, 1) * v[1];
        out[1] = r.at(1, 0) * v[0] + r.at(1, 1) * v[1];
        return out;
    };
    const cvector nu1 = rotate(m1), nu2 = rotate(m2);
    ComplexMatrix xi(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            xi.at(i, j) = nu1[i] * std::conj(nu1[j]) + nu2[i] * std::conj(nu2[j]);
    ComplexMatrix eta = ComplexMatrix::identity(1);
    for (int k = 0; k < config.n_qubits; ++k) eta = kron(eta, xi);
    return eta;
}

HamiltonianTerms::HamiltonianTerms(const SystemConfig& config)
    : n_qubits_(config.n_qubits), dim_(config.dim()) {
    config.validate();
    for (int k = 1; k <= n_qubits_; ++k) {
        x_ops_.push_back(single_site(pauli_x(), k, n_qubits_));
        y_ops_.push_back(single_site(pauli_y(), k, n_qubits_));
    }
    for (int k = 1; k <= n_qubits_; ++k)
        for (int l = k + 1; l <= n_qubits_; ++l) {
            pairs_.emplace_back(k, l);
            std::vector<double> diag(dim_);
            for (int i = 0; i < dim_; ++i) {
                const int zk = ((i >> (n_qubits_ - k)) & 1) ? -1 : 1;
                const int zl = ((i >> (n_qubits_ - l)) & 1) ? -1 : 1;
                diag[i] = static_cast<double>(zk * zl);
            }
            zz_diag_.push_back(std::move(diag));
        }
    z1_diag_.resize(dim_);
    for (int i = 0; i < dim_; ++i)
        z1_diag_[i] = ((i >> (n_qubits_ - 1)) & 1) ? -1.0 : 1.0;
}

void HamiltonianTerms::assemble(const FieldPoint& point, const Couplings& couplings,
                                double epsilon, ComplexMatrix& out) const {
    if (out.dim() != dim_) out = ComplexMatrix(dim_);
    std::fill(out.data(), out.data() + static_cast<std::size_t>(dim_) * dim_, cplx(0.0, 0.0));
    for (int k = 0; k < n_qubits_; ++k) {
        out.add_scaled(point.b_x[k], x_ops_[k]);
        out.add_scaled(point.b_y[k], y_ops_[k]);
    }
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
        const double j = couplings[pairs_[p].first - 1][pairs_[p].second - 1];
        if (j == 0.0) continue;
        for (int i = 0; i < dim_; ++i) out.at(i, i) += j * zz_diag_[p][i];
    }
    if (epsilon != 0.0)
        for (int i = 0; i < dim_; ++i) out.at(i, i) += epsilon * z1_diag_[i];
}

}  // namespace epsim
