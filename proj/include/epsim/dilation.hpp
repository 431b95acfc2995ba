#pragma once

#include <vector>

#include "epsim/complex_matrix.hpp"
#include "epsim/dynamics.hpp"
#include "epsim/field.hpp"

namespace epsim {

// Hermitian embedding [[h1, h2], [h2^H, h3]] acting on (psi, D psi), with
// D = sqrt(eta_s - I), h3 = 0 and U = I. The raw metric always has
// lambda_min < 1 away from the Hermitian phase, so eta is rescaled by
// metric_scale to make eta_s - I positive definite (any positive multiple of
// a metric is a metric).
struct DilationResult {
    ComplexMatrix d_matrix;
    ComplexMatrix h1, h2, h3;
    ComplexMatrix dilated;  // 2n x 2n
    double hermiticity_residual = 0.0;
    double metric_scale = 1.0;
    bool trivial = false;  // Hermitian phase: D = 0, h1 = H
};

// Static control point. Throws MetricNotDilatableError if eta has a
// non-positive eigenvalue and PartialDilationError if eta_s - I is singular.
DilationResult build_dilation(const SystemConfig& config, const FieldPoint& point);

// Along a schedule, with D-dot from central finite differences at fd_dt and a
// caller-fixed metric scale (kept constant over a segment).
DilationResult build_dilation_at(const ModulationSchedule& s, double t, double fd_dt,
                                 double metric_scale);

// ||H^H eta - eta H||_F / ||eta||_F with the instantaneous metric: the static
// form of the metric evolution equation.
double static_metric_residual(const SystemConfig& config, const FieldPoint& point);

// ||i (eta(t+dt) - eta(t-dt))/(2dt) - (H^H eta - eta H)(t)||_F / ||eta(t)||_F
// with instantaneous metrics along the schedule.
double check_metric_equation(const ModulationSchedule& s, double t, double dt);

// Scale that keeps eta_s - I comfortably positive over [t0, t1].
double dilation_scale_for_segment(const ModulationSchedule& s, double t0, double t1,
                                  int samples = 64);

struct DilatedEvolution {
    std::vector<double> times;
    std::vector<double> top_block_error;  // ||top(Psi) - psi_nhh|| at samples
    double max_error = 0.0;
    double max_hermiticity_residual = 0.0;  // over sampled assemblies
    double metric_scale = 1.0;
};

// Integrates the 2n-dimensional dilated system and the n-dimensional NHH side
// by side over [t0, t1] with the same RK4 grid, starting from psi0 and
// Psi0 = (psi0, D(t0) psi0).
DilatedEvolution dilated_segment_evolve(const ModulationSchedule& s, double t0, double t1,
                                        long steps, const cvector& psi0, int samples = 64);

}  // namespace epsim
