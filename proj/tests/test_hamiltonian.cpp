#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epsim/eigensolver.hpp"
#include "epsim/errors.hpp"
#include "epsim/hamiltonian.hpp"
#include "oracles.hpp"

using namespace epsim;

namespace {

SystemConfig fig4_config() {
    return SystemConfig(3, {1.0, 1.0, 2.0},
                        {{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}});
}

std::vector<std::pair<double, double>> random_finite_points(int count, unsigned seed,
                                                            double min_ep_dist = 0.1) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.0, 2.0);
    std::vector<std::pair<double, double>> pts;
    while (static_cast<int>(pts.size()) < count) {
        const double x = ux(rng), y = uy(rng);
        if (std::hypot(x, y - 1.0) < min_ep_dist) continue;
        pts.emplace_back(x, y);
    }
    return pts;
}

double pseudo_hermiticity_residual(const ComplexMatrix& h, const ComplexMatrix& eta) {
    const ComplexMatrix lhs = eta * h * LuFactor(eta).inverse();
    return (lhs - h.adjoint()).frobenius_norm() / h.frobenius_norm();
}

}  // namespace

TEST_CASE("single-qubit Hermitian point matches alpha(sin phi sx + cos phi sy)") {
    SystemConfig cfg(1, {1.0}, {{0.0}});
    const FieldPoint p = field_point(cfg, 1.0, 0.0);
    const ComplexMatrix h = build_nhh(cfg, p);
    ComplexMatrix expected(2);
    expected.add_scaled(p.alpha * std::sin(p.phi.real()), pauli_x());
    expected.add_scaled(p.alpha * std::cos(p.phi.real()), pauli_y());
    CHECK((h - expected).frobenius_norm() < 1e-14);
    CHECK((h - h.adjoint()).frobenius_norm() < 1e-14);
}

TEST_CASE("noninteracting spectrum is the hypercube ladder") {
    SystemConfig cfg(3, {1.0, 1.0, 1.0},
                     {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
    for (auto [x, y] : random_finite_points(20, 7)) {
        const FieldPoint p = field_point(cfg, x, y);
        const ComplexMatrix h = build_nhh(cfg, p);
        const EigenSystem eig = eigensystem_sorted(h);
        const double a = std::abs(p.alpha);
        const std::vector<double> ladder = {-3 * a, -a, -a, -a, a, a, a, 3 * a};
        for (int k = 0; k < 8; ++k) {
            CHECK(std::abs(eig.eigenvalues[k] - ladder[k]) < 1e-10);
            CHECK(eig.eigenvalues_imag[k] == 0.0);
        }
    }
}

TEST_CASE("two-qubit spectrum agrees with the characteristic polynomial oracle") {
    SystemConfig cfg(2, {1.0, 2.0}, {{0.0, 1.0}, {1.0, 0.0}});
    for (auto [x, y] : random_finite_points(10, 11)) {
        const FieldPoint p = field_point(cfg, x, y);
        const ComplexMatrix h = build_nhh(cfg, p);
        const EigenSystem eig = eigensystem_sorted(h);
        std::vector<cplx> ours;
        for (int k = 0; k < 4; ++k) ours.push_back(eig.value(k));
        CHECK(oracles::match_distance(ours, oracles::eigenvalues(h)) < 1e-8);
    }
}

TEST_CASE("couplings override replaces the static matrix") {
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.5, 0.5);
    Couplings off(3, std::vector<double>(3, 0.0));
    const ComplexMatrix hoff = build_nhh(cfg, p, off);
    SystemConfig nocoupling(3, {1.0, 1.0, 2.0}, off);
    CHECK((hoff - build_nhh(nocoupling, p)).frobenius_norm() < 1e-15);
    Couplings bad = off;
    bad[0][1] = 1.0;  // asymmetric
    CHECK_THROWS_AS(build_nhh(cfg, p, bad), ConfigError);
}

TEST_CASE("metric is Hermitian, positive definite and satisfies the similarity relation") {
    const SystemConfig cfg = fig4_config();
    for (auto [x, y] : random_finite_points(25, 3)) {
        const FieldPoint p = field_point(cfg, x, y);
        const ComplexMatrix h = build_nhh(cfg, p);
        const ComplexMatrix eta = build_metric(cfg, p);
        CHECK((eta - eta.adjoint()).frobenius_norm() < 1e-12 * eta.frobenius_norm());
        const HermitianEigen spec = hermitian_eigensystem(eta);
        CHECK(spec.eigenvalues.front() > 0.0);
        CHECK(pseudo_hermiticity_residual(h, eta) < 1e-10);
    }
}

TEST_CASE("metric equals the closed-form diagonal oracle") {
    // The biorthonormal left-eigenvector construction collapses to
    // diag(e^{Im phi}, e^{-Im phi}) per qubit.
    const SystemConfig cfg = fig4_config();
    for (auto [x, y] : random_finite_points(25, 5)) {
        const FieldPoint p = field_point(cfg, x, y);
        const ComplexMatrix eta = build_metric(cfg, p);
        const double b = p.phi.imag();
        ComplexMatrix xi(2);
        xi.at(0, 0) = std::exp(b);
        xi.at(1, 1) = std::exp(-b);
        ComplexMatrix expected = ComplexMatrix::identity(1);
        for (int k = 0; k < cfg.n_qubits; ++k) expected = kron(expected, xi);
        CHECK((eta - expected).frobenius_norm() < 1e-12 * expected.frobenius_norm());
    }
}

TEST_CASE("metric is the identity in the Hermitian phase") {
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.7, 0.0);
    const ComplexMatrix eta = build_metric(cfg, p);
    CHECK((eta - ComplexMatrix::identity(8)).frobenius_norm() < 1e-12);
}

TEST_CASE("ZZ interaction commutes with the metric") {
    const SystemConfig cfg = fig4_config();
    for (auto [x, y] : random_finite_points(10, 13)) {
        const FieldPoint p = field_point(cfg, x, y);
        const ComplexMatrix eta = build_metric(cfg, p);
        ComplexMatrix hint(8);
        for (int k = 1; k <= 3; ++k)
            for (int l = k + 1; l <= 3; ++l)
                hint.add_scaled(cfg.couplings[k - 1][l - 1],
                                single_site(pauli_z(), k, 3) * single_site(pauli_z(), l, 3));
        const ComplexMatrix lhs = eta * hint * LuFactor(eta).inverse();
        CHECK((lhs - hint).frobenius_norm() < 1e-10);
    }
}

TEST_CASE("spectrum is real at finite points for the interacting system") {
    const SystemConfig cfg = fig4_config();
    for (auto [x, y] : random_finite_points(20, 17)) {
        const FieldPoint p = field_point(cfg, x, y);
        const EigenSystem eig = eigensystem_sorted(build_nhh(cfg, p));
        CHECK_FALSE(eig.complex_spectrum);
        std::vector<cplx> ours;
        for (int k = 0; k < 8; ++k) ours.push_back(eig.value(k));
        CHECK(oracles::match_distance(ours, oracles::eigenvalues(build_nhh(cfg, p))) < 1e-7);
    }
}

TEST_CASE("sigma_z perturbation weight and (exact) spectral reality") {
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.4, 0.9);
    const ComplexMatrix h = build_nhh(cfg, p);
    const ComplexMatrix hp = build_perturbed_nhh(cfg, p, std::nullopt, 1e-3);
    CHECK((build_perturbed_nhh(cfg, p, std::nullopt, 0.0) - h).frobenius_norm() == 0.0);
    // sigma_z^1 has 2^N unit-modulus diagonal entries.
    CHECK((hp - h).frobenius_norm() ==
          doctest::Approx(1e-3 * std::sqrt(8.0)).epsilon(1e-13));
    // The metric is diagonal, so it commutes with sigma_z^1: the perturbed
    // Hamiltonian is still quasi-Hermitian and its spectrum stays real.
    const ComplexMatrix eta = build_metric(cfg, p);
    CHECK(pseudo_hermiticity_residual(hp, eta) < 1e-10);
    const EigenSystem eig = eigensystem_sorted(hp);
    CHECK_FALSE(eig.complex_spectrum);
}

TEST_CASE("a transverse perturbation does break the real spectrum") {
    // Contrast case: sigma_x on qubit 1 does not commute with the metric.
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.4, 0.9);
    ComplexMatrix h = build_nhh(cfg, p);
    h.add_scaled(1e-3, single_site(pauli_x(), 1, 3));
    const EigenSystem eig = eigensystem_sorted(h);
    CHECK(eig.complex_spectrum);
    CHECK(eig.max_abs_imag() > 1e-5);
}

TEST_CASE("left eigenvectors are the spin-flipped conjugates of the right ones") {
    // X H* X = H^H identically for this family, so left_k ~ X conj(right_k).
    const SystemConfig cfg = fig4_config();
    const ComplexMatrix x_all = single_site(pauli_x(), 1, 3) * single_site(pauli_x(), 2, 3) *
                                single_site(pauli_x(), 3, 3);
    for (auto [x, y] : random_finite_points(10, 23)) {
        const FieldPoint p = field_point(cfg, x, y);
        const ComplexMatrix h = build_nhh(cfg, p);
        CHECK((x_all * h.conj() * x_all - h.adjoint()).frobenius_norm() < 1e-12);
        const EigenSystem eig = eigensystem_sorted(h);
        for (int k = 0; k < 8; ++k) {
            cvector flipped(8);
            for (int i = 0; i < 8; ++i) flipped[i] = std::conj(eig.right_vectors[k][i]);
            flipped = x_all.apply(flipped);
            vec_normalize(flipped);
            CHECK(std::abs(vec_dot(eig.left_vectors[k], flipped)) ==
                  doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("metric construction refuses coalesced eigenvectors") {
    SystemConfig cfg(1, {1.0}, {{0.0}});
    FieldPoint p;
    p.x = 0.0;
    p.y = 1.0;
    p.phi = cplx(M_PI / 2, -14.0);  // overlap |tanh(-14)| within 1e-10 of 1
    p.alpha = 1.0;
    p.b_x = {cplx(1.0, 0.0)};
    p.b_y = {cplx(0.0, 0.0)};
    CHECK_THROWS_AS(build_metric(cfg, p), IllConditionedMetricError);
}
