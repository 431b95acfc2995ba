#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "epsim/dilation.hpp"
#include "epsim/eigensolver.hpp"
#include "epsim/errors.hpp"
#include "epsim/hamiltonian.hpp"

using namespace epsim;

namespace {

SystemConfig fig4_config() {
    return SystemConfig(3, {1.0, 1.0, 2.0},
                        {{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}});
}

ModulationSchedule fig4_schedule() {
    ModulationSchedule s;
    s.config = fig4_config();
    s.r_x = 3.0;
    s.r_y = 6.0;
    s.period = 2500.0;
    return s;
}

}  // namespace

TEST_CASE("Hermitian phase returns the trivial dilation") {
    const SystemConfig cfg = fig4_config();
    const FieldPoint p = field_point(cfg, 0.8, 0.0);
    const DilationResult res = build_dilation(cfg, p);
    CHECK(res.trivial);
    CHECK(res.d_matrix.frobenius_norm() == 0.0);
    CHECK(res.h2.frobenius_norm() == 0.0);
    CHECK(res.hermiticity_residual < 1e-12);
    CHECK((res.h1 - build_nhh(cfg, p)).frobenius_norm() < 1e-14);
}

TEST_CASE("static dilations are Hermitian and satisfy the block equations") {
    const SystemConfig cfg = fig4_config();
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.05, 2.0);
    int done = 0;
    while (done < 15) {
        const double x = ux(rng), y = uy(rng);
        if (std::hypot(x, y - 1.0) < 0.1 || std::abs(y) < 0.02) continue;
        const FieldPoint p = field_point(cfg, x, y);
        const DilationResult res = build_dilation(cfg, p);
        CHECK(res.hermiticity_residual < 1e-10);
        // eta_s - I = D^H D must be positive definite.
        const ComplexMatrix dtd = res.d_matrix.adjoint() * res.d_matrix;
        const HermitianEigen spec = hermitian_eigensystem(dtd);
        CHECK(spec.eigenvalues.front() > 1e-8);
        // Block equation h1 + h2 D = H.
        const ComplexMatrix h = build_nhh(cfg, p);
        CHECK((res.h1 + res.h2 * res.d_matrix - h).frobenius_norm() <
              1e-10 * h.frobenius_norm());
        ++done;
    }
}

TEST_CASE("dilated top block tracks the NHH over a schedule segment") {
    const ModulationSchedule s = fig4_schedule();
    const EigenSystem basis = initial_basis(s, 0.0);
    const DilatedEvolution seg =
        dilated_segment_evolve(s, 0.0, s.period / 16.0, 10000, basis.right_vectors[1]);
    CHECK(seg.max_error < 1e-6);
    // Halving the step shrinks the deviation (fourth-order, with a finite
    // floor from the D-dot finite difference).
    const DilatedEvolution fine =
        dilated_segment_evolve(s, 0.0, s.period / 16.0, 20000, basis.right_vectors[1]);
    CHECK(fine.max_error < seg.max_error / 6.0);
}

TEST_CASE("metric evolution equation: static residual vanishes") {
    const SystemConfig cfg = fig4_config();
    for (auto [x, y] : {std::pair{0.7, 0.6}, {-1.2, 1.4}, {0.2, 1.9}}) {
        const FieldPoint p = field_point(cfg, x, y);
        CHECK(static_metric_residual(cfg, p) < 1e-10);
    }
}

TEST_CASE("metric evolution equation: symmetric point and FD order") {
    const ModulationSchedule s = fig4_schedule();
    // At t = T/2 the instantaneous metric is stationary: residual is pure
    // truncation and tiny.
    CHECK(check_metric_equation(s, s.period / 2.0, 1e-3) < 1e-4);
    // At a generic point the residual converges at second order to the
    // metric non-constancy plateau ||d eta/dt|| / ||eta||.
    const double r4 = check_metric_equation(s, 0.3 * s.period, 4.0);
    const double r2 = check_metric_equation(s, 0.3 * s.period, 2.0);
    const double r1 = check_metric_equation(s, 0.3 * s.period, 1.0);
    const double ratio = (r4 - r2) / (r2 - r1);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
    CHECK(r1 > 1e-5);  // the plateau itself is nonzero: eta_inst is not constant
}

TEST_CASE("dilation scale covers the sampled segment") {
    const ModulationSchedule s = fig4_schedule();
    const double scale = dilation_scale_for_segment(s, 0.0, s.period / 4.0);
    CHECK(scale >= 2.0);
    const SchedulePoint p = schedule_eval(s, s.period / 8.0);
    const ComplexMatrix eta = build_metric(s.config, p.field);
    const HermitianEigen spec = hermitian_eigensystem(eta);
    CHECK(scale * spec.eigenvalues.front() > 1.5);
}
