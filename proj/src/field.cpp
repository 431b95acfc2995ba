#include "epsim/field.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "epsim/errors.hpp"

namespace epsim {

SystemConfig::SystemConfig(int n, std::vector<double> f, std::vector<std::vector<double>> j)
    : n_qubits(n), field_scales(std::move(f)), couplings(std::move(j)) {
    if (couplings.empty()) couplings.assign(n_qubits, std::vector<double>(n_qubits, 0.0));
    validate();
}

void SystemConfig::validate() const {
    if (n_qubits < 1) throw ConfigError("SystemConfig: n_qubits must be >= 1");
    if (static_cast<int>(field_scales.size()) != n_qubits)
        throw ConfigError("SystemConfig: field_scales length must equal n_qubits");
    if (static_cast<int>(couplings.size()) != n_qubits)
        throw ConfigError("SystemConfig: couplings must be n_qubits x n_qubits");
    for (int k = 0; k < n_qubits; ++k) {
        if (static_cast<int>(couplings[k].size()) != n_qubits)
            throw ConfigError("SystemConfig: couplings must be n_qubits x n_qubits");
        if (couplings[k][k] != 0.0) throw ConfigError("SystemConfig: coupling diagonal must be zero");
        for (int l = 0; l < n_qubits; ++l)
            if (couplings[k][l] != couplings[l][k])
                throw ConfigError("SystemConfig: couplings must be symmetric");
    }
}

cplx compute_phi(double x, double y) {
    if (x == 0.0) {
        // 1/(iy) sits on the arctan branch cut; take the x -> 0+ side.
        if (y == 0.0) return {M_PI / 2.0, 0.0};
        const double ay = std::abs(y);
        if (ay < 1.0) {
            // phi = pi/2 - i*artanh(y)
            return {M_PI / 2.0, -std::atanh(y)};
        }
        if (ay == 1.0) {
            // On the twisted EP itself; Im phi diverges.
            return {M_PI / 2.0, y > 0 ? -std::numeric_limits<double>::infinity()
                                      : std::numeric_limits<double>::infinity()};
        }
        // |y| > 1: phi = -i*artanh(1/y), purely imaginary.
        return {0.0, -std::atanh(1.0 / y)};
    }
    return std::atan(cplx(1.0, 0.0) / cplx(x, y));
}

AlphaResult compute_alpha(double x, double y) {
    if (std::hypot(x, y - 1.0) < kEpEvalRadius || std::hypot(x, y + 1.0) < kEpEvalRadius)
        return {0.0, true};
    const cplx phi = compute_phi(x, y);
    const double re = phi.real(), im = phi.imag();
    if (std::abs(im) < kAlphaSeriesThreshold) {
        // 0/0 on the Hermitian line; leading series term Im phi = -y/(1+x^2)
        // cancels y and leaves a finite limit.
        return {-(1.0 + x * x) * std::sin(re), false};
    }
    return {y * std::sin(re) / std::sin(im), false};
}

FieldPoint field_point(const SystemConfig& config, double x, double y) {
    const AlphaResult alpha = compute_alpha(x, y);
    if (alpha.divergent)
        throw DivergentFieldError("field_point: (" + std::to_string(x) + ", " + std::to_string(y) +
                                  ") is inside the EP evaluation disk");
    FieldPoint p;
    p.x = x;
    p.y = y;
    p.phi = compute_phi(x, y);
    p.alpha = alpha.value;
    const cplx sp = std::sin(p.phi);
    const cplx cp = std::cos(p.phi);
    p.b_x.resize(config.n_qubits);
    p.b_y.resize(config.n_qubits);
    for (int k = 0; k < config.n_qubits; ++k) {
        const double fa = config.field_scales[k] * p.alpha;
        p.b_x[k] = fa * sp;
        p.b_y[k] = fa * cp;
    }
    return p;
}

}  // namespace epsim
