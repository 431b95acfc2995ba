#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epsim/betadyne.hpp"
#include "epsim/errors.hpp"
#include "epsim/hamiltonian.hpp"
#include "epsim/io.hpp"

using namespace epsim;

namespace {

SystemConfig fig4_config() {
    return SystemConfig(3, {1.0, 1.0, 2.0},
                        {{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}});
}

}  // namespace

TEST_CASE("uniform couplings give U = 4 and Re Delta = -4") {
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.5, 0.8);
    const BetadyneParams params = map_to_betadyne(cfg, p, 2.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(params.detunings[i].real() == doctest::Approx(-4.0));
        CHECK(params.detunings[i].imag() == doctest::Approx(1.0));  // +gamma/2
        for (int j = 0; j < 3; ++j)
            CHECK(params.kerr[i][j] == doctest::Approx(i == j ? 0.0 : 4.0));
    }
}

TEST_CASE("real fields need no displacement") {
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.9, 0.0);  // Hermitian line
    const BetadyneParams params = map_to_betadyne(cfg, p, 1.5);
    for (const cplx& b : params.displacements) CHECK(std::abs(b) < 1e-14);
}

TEST_CASE("field components round-trip through the parameter relations") {
    const SystemConfig cfg = fig4_config();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.0, 2.0);
    int done = 0;
    while (done < 25) {
        const double x = ux(rng), y = uy(rng);
        if (std::hypot(x, y - 1.0) < 0.05) continue;
        const FieldPoint p = field_point(cfg, x, y);
        const BetadyneParams params = map_to_betadyne(cfg, p, 0.7);
        std::vector<cplx> bx, by;
        betadyne_fields(params, bx, by);
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(bx[k] - p.b_x[k]) < 1e-12 * std::max(1.0, std::abs(p.b_x[k])));
            CHECK(std::abs(by[k] - p.b_y[k]) < 1e-12 * std::max(1.0, std::abs(p.b_y[k])));
        }
        ++done;
    }
}

TEST_CASE("displaced effective Hamiltonian equals the spin NHH up to c*I") {
    const SystemConfig cfg = fig4_config();
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.0, 2.0);
    int done = 0;
    while (done < 10) {
        const double x = ux(rng), y = uy(rng);
        if (std::hypot(x, y - 1.0) < 0.05) continue;
        const FieldPoint p = field_point(cfg, x, y);
        const BetadyneParams params = map_to_betadyne(cfg, p, 2.0);
        const ComplexMatrix heff = build_betadyne_nhh(params, cfg);
        const ComplexMatrix hspin = build_nhh(cfg, p);
        ComplexMatrix diff = heff - hspin;
        const cplx c = diff.at(0, 0);
        diff -= c * ComplexMatrix::identity(8);
        CHECK(diff.frobenius_norm() < 1e-9 * hspin.frobenius_norm());
        // Real part: the identity component of the hard-core ZZ map
        // (-sum J); imaginary part: the gauged displaced-decay weight.
        double sum_j = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) sum_j += cfg.couplings[a][b];
        double sum_b2 = 0.0;
        for (const cplx& b : params.displacements) sum_b2 += std::norm(b);
        CHECK(c.real() == doctest::Approx(-sum_j).epsilon(1e-9));
        CHECK(c.imag() == doctest::Approx(-0.5 * params.gamma * sum_b2).epsilon(1e-9));
        ++done;
    }
}

TEST_CASE("noninteracting systems have a purely imaginary coefficient") {
    SystemConfig cfg(3, {1.0, 1.0, 2.0},
                     {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}});
    const FieldPoint p = field_point(cfg, 0.7, 1.3);
    const BetadyneParams params = map_to_betadyne(cfg, p, 2.0);
    const ComplexMatrix diff = build_betadyne_nhh(params, cfg) - build_nhh(cfg, p);
    const cplx c = diff.at(0, 0);
    CHECK(std::abs(c.real()) < 1e-12);
    CHECK(c.imag() < 0.0);
}

TEST_CASE("single mode eigenvalues shift by the constant onto +-alpha") {
    SystemConfig cfg(1, {1.0}, {{0.0}});
    const FieldPoint p = field_point(cfg, 0.4, 1.6);
    const BetadyneParams params = map_to_betadyne(cfg, p, 3.0);
    const ComplexMatrix heff = build_betadyne_nhh(params, cfg);
    const cplx c = (heff - build_nhh(cfg, p)).at(0, 0);
    // Shifted eigenvalues must be +-alpha.
    ComplexMatrix shifted = heff;
    shifted -= c * ComplexMatrix::identity(2);
    const cplx tr = shifted.trace();
    const cplx det = shifted.at(0, 0) * shifted.at(1, 1) - shifted.at(0, 1) * shifted.at(1, 0);
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx e1 = 0.5 * (tr + disc), e2 = 0.5 * (tr - disc);
    CHECK(std::abs(std::abs(e1) - std::abs(p.alpha)) < 1e-10);
    CHECK(std::abs(std::abs(e2) - std::abs(p.alpha)) < 1e-10);
}

TEST_CASE("nonpositive decay is rejected") {
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.5, 0.8);
    CHECK_THROWS_AS(map_to_betadyne(cfg, p, 0.0), ConfigError);
    CHECK_THROWS_AS(map_to_betadyne(cfg, p, -1.0), ConfigError);
}

TEST_CASE("parameters serialize with the documented field names") {
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.5, 0.8);
    const nlohmann::json j = to_json(map_to_betadyne(cfg, p, 2.0));
    CHECK(j.contains("delta"));
    CHECK(j.contains("kerr_u"));
    CHECK(j.contains("beta"));
    CHECK(j.contains("drive_eta"));
    CHECK(j.contains("gamma"));
    CHECK(j["delta"].size() == 3);
}
