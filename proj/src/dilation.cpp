#include "epsim/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epsim/eigensolver.hpp"
#include "epsim/errors.hpp"
#include "epsim/hamiltonian.hpp"
#include "epsim/kernels.hpp"

namespace epsim {

namespace {

const cplx kI(0.0, 1.0);

ComplexMatrix assemble_blocks(const ComplexMatrix& h1, const ComplexMatrix& h2,
                              const ComplexMatrix& h3) {
    const int n = h1.dim();
    ComplexMatrix out(2 * n);
    const ComplexMatrix h2adj = h2.adjoint();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            out.at(i, j) = h1.at(i, j);
            out.at(i, n + j) = h2.at(i, j);
            out.at(n + i, j) = h2adj.at(i, j);
            out.at(n + i, n + j) = h3.at(i, j);
        }
    return out;
}

double hermiticity_residual_of(const ComplexMatrix& m) {
    const double denom = m.frobenius_norm();
    if (denom == 0.0) return 0.0;
    return (m - m.adjoint()).frobenius_norm() / denom;
}

// Core assembly once D, Ddot and H are known.
DilationResult dilation_from(const ComplexMatrix& h, const ComplexMatrix& d,
                             const ComplexMatrix& ddot, double scale) {
    const int n = h.dim();
    DilationResult res;
    res.metric_scale = scale;
    res.d_matrix = d;
    res.h3 = ComplexMatrix(n);
    const ComplexMatrix dtd = d.adjoint() * d;
    // h1 = H + i*Ddot^H D - H^H D^H D   (h3 = 0)
    res.h1 = h;
    res.h1 += kI * (ddot.adjoint() * d);
    res.h1 -= h.adjoint() * dtd;
    LuFactor lu(d);
    if (lu.singular() || lu.min_pivot() < 1e-8)
        throw PartialDilationError("build_dilation: D is numerically singular");
    // h2 = (H - h1) D^{-1}  via  h2^H = D^{-H} (H - h1)^H = solve(D^H, .)
    const ComplexMatrix rhs = (h - res.h1).adjoint();
    LuFactor lu_adj(d.adjoint());
    res.h2 = lu_adj.solve(rhs).adjoint();
    res.dilated = assemble_blocks(res.h1, res.h2, res.h3);
    res.hermiticity_residual = hermiticity_residual_of(res.dilated);
    return res;
}

}  // namespace

DilationResult build_dilation(const SystemConfig& config, const FieldPoint& point) {
    const ComplexMatrix h = build_nhh(config, point);
    const ComplexMatrix eta = build_metric(config, point);
    const int n = h.dim();

    const ComplexMatrix eta_minus_id = eta - ComplexMatrix::identity(n);
    if (eta_minus_id.frobenius_norm() < 1e-12 * std::sqrt(static_cast<double>(n))) {
        // Hermitian phase: eta = I needs no ancilla.
        DilationResult res;
        res.trivial = true;
        res.d_matrix = ComplexMatrix(n);
        res.h1 = h;
        res.h2 = ComplexMatrix(n);
        res.h3 = ComplexMatrix(n);
        res.dilated = assemble_blocks(res.h1, res.h2, res.h3);
        res.hermiticity_residual = hermiticity_residual_of(res.dilated);
        return res;
    }

    const HermitianEigen spec = hermitian_eigensystem(eta);
    const double lmin = spec.eigenvalues.front();
    if (lmin <= 0.0)
        throw MetricNotDilatableError("build_dilation: metric has a non-positive eigenvalue");
    const double scale = 2.0 / lmin;
    ComplexMatrix eta_s = eta;
    eta_s *= scale;
    const ComplexMatrix d = sqrt_psd(eta_s - ComplexMatrix::identity(n));
    return dilation_from(h, d, ComplexMatrix(n), scale);
}

DilationResult build_dilation_at(const ModulationSchedule& s, double t, double fd_dt,
                                 double metric_scale) {
    auto d_at = [&](double tt) {
        const SchedulePoint p = schedule_eval(s, tt);
        ComplexMatrix eta = build_metric(s.config, p.field);
        eta *= metric_scale;
        return sqrt_psd(eta - ComplexMatrix::identity(eta.dim()));
    };
    const SchedulePoint p = schedule_eval(s, t);
    const ComplexMatrix h = build_nhh(s.config, p.field, p.couplings);
    const ComplexMatrix d = d_at(t);
    ComplexMatrix ddot = d_at(t + fd_dt) - d_at(t - fd_dt);
    ddot *= 1.0 / (2.0 * fd_dt);
    return dilation_from(h, d, ddot, metric_scale);
}

double static_metric_residual(const SystemConfig& config, const FieldPoint& point) {
    const ComplexMatrix h = build_nhh(config, point);
    const ComplexMatrix eta = build_metric(config, point);
    return (h.adjoint() * eta - eta * h).frobenius_norm() / eta.frobenius_norm();
}

double check_metric_equation(const ModulationSchedule& s, double t, double dt) {
    const SchedulePoint pm = schedule_eval(s, t - dt);
    const SchedulePoint p0 = schedule_eval(s, t);
    const SchedulePoint pp = schedule_eval(s, t + dt);
    const ComplexMatrix eta_m = build_metric(s.config, pm.field);
    const ComplexMatrix eta_0 = build_metric(s.config, p0.field);
    const ComplexMatrix eta_p = build_metric(s.config, pp.field);
    const ComplexMatrix h = build_nhh(s.config, p0.field, p0.couplings);
    ComplexMatrix fd = eta_p - eta_m;
    fd *= kI * (1.0 / (2.0 * dt));
    const ComplexMatrix rhs = h.adjoint() * eta_0 - eta_0 * h;
    return (fd - rhs).frobenius_norm() / eta_0.frobenius_norm();
}

double dilation_scale_for_segment(const ModulationSchedule& s, double t0, double t1,
                                  int samples) {
    double lmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        const double t = t0 + (t1 - t0) * i / samples;
        const SchedulePoint p = schedule_eval(s, t);
        const ComplexMatrix eta = build_metric(s.config, p.field);
        const HermitianEigen spec = hermitian_eigensystem(eta);
        lmin = std::min(lmin, spec.eigenvalues.front());
    }
    if (lmin <= 0.0)
        throw MetricNotDilatableError("dilation_scale_for_segment: non-positive metric");
    return 2.0 / lmin;
}

DilatedEvolution dilated_segment_evolve(const ModulationSchedule& s, double t0, double t1,
                                        long steps, const cvector& psi0, int samples) {
    const int n = s.config.dim();
    const double h_step = (t1 - t0) / static_cast<double>(steps);
    const double fd_dt = s.period * 1e-6;
    const HamiltonianTerms terms(s.config);

    DilatedEvolution out;
    out.metric_scale = dilation_scale_for_segment(s, t0, t1);

    auto dilated_h = [&](double t) {
        DilationResult r = build_dilation_at(s, t, fd_dt, out.metric_scale);
        out.max_hermiticity_residual =
            std::max(out.max_hermiticity_residual, r.hermiticity_residual);
        return std::make_pair(std::move(r.dilated), std::move(r.d_matrix));
    };
    auto nhh = [&](double t) {
        const SchedulePoint p = schedule_eval(s, t);
        ComplexMatrix m;
        terms.assemble(p.field, p.couplings, 0.0, m);
        return m;
    };

    // Initial dilated vector (psi, D psi).
    cvector psi = psi0;
    auto [hd0, d0] = dilated_h(t0);
    cvector big(2 * n);
    {
        const cvector dpsi = d0.apply(psi0);
        for (int i = 0; i < n; ++i) {
            big[i] = psi0[i];
            big[n + i] = dpsi[i];
        }
    }

    const cplx minus_i(0.0, -1.0);
    auto rk4_step = [&](cvector& v, const ComplexMatrix& hc, const ComplexMatrix& hm,
                        const ComplexMatrix& hn, double dt) {
        const std::size_t m = v.size();
        cvector g1(m), g2(m), g3(m), g4(m), u(m);
        kernels::matvec(m, hc.data(), v.data(), g1.data());
        kernels::xpay(m, v.data(), minus_i * (0.5 * dt), g1.data(), u.data());
        kernels::matvec(m, hm.data(), u.data(), g2.data());
        kernels::xpay(m, v.data(), minus_i * (0.5 * dt), g2.data(), u.data());
        kernels::matvec(m, hm.data(), u.data(), g3.data());
        kernels::xpay(m, v.data(), minus_i * dt, g3.data(), u.data());
        kernels::matvec(m, hn.data(), u.data(), g4.data());
        kernels::rk4_combine(m, v.data(), minus_i * (dt / 6.0), g1.data(), g2.data(), g3.data(),
                             g4.data(), v.data());
    };

    const long sample_every = std::max<long>(1, steps / samples);
    ComplexMatrix hd_cur = std::move(hd0);
    ComplexMatrix hn_cur = nhh(t0);
    for (long step = 0; step <= steps; ++step) {
        const double t = t0 + step * h_step;
        if (step % sample_every == 0 || step == steps) {
            double err = 0.0;
            for (int i = 0; i < n; ++i) err += std::norm(big[i] - psi[i]);
            err = std::sqrt(err);
            out.times.push_back(t);
            out.top_block_error.push_back(err);
            out.max_error = std::max(out.max_error, err);
        }
        if (step == steps) break;
        auto [hd_mid, d_mid] = dilated_h(t + 0.5 * h_step);
        auto [hd_next, d_next] = dilated_h(t + h_step);
        const ComplexMatrix hn_mid = nhh(t + 0.5 * h_step);
        const ComplexMatrix hn_next = nhh(t + h_step);
        rk4_step(big, hd_cur, hd_mid, hd_next, h_step);
        rk4_step(psi, hn_cur, hn_mid, hn_next, h_step);
        hd_cur = std::move(hd_next);
        hn_cur = hn_next;
    }
    return out;
}

}  // namespace epsim
