#include "epsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "epsim/errors.hpp"
#include "epsim/kernels.hpp"
#include "epsim/spectral.hpp"

namespace epsim {

namespace {

const cplx kMinusI(0.0, -1.0);

Couplings couplings_at(const ModulationSchedule& s, double t) {
    Couplings j = s.config.couplings;
    const double omega = 2.0 * M_PI / s.period;
    const double env = std::cos(omega * t / 2.0);
    const double env2 = env * env;
    for (const auto& [k, l] : s.modulated_couplings) {
        j[k - 1][l - 1] *= env2;
        j[l - 1][k - 1] = j[k - 1][l - 1];
    }
    return j;
}

void control_point(const ModulationSchedule& s, double t, double& x, double& y) {
    const double omega = 2.0 * M_PI / s.period;
    const double theta = s.direction * omega * t + s.phi_0;
    x = s.r_x * std::sin(theta);
    y = s.r_y * (1.0 + std::cos(theta));
}

}  // namespace

void ModulationSchedule::validate() const {
    config.validate();
    if (period <= 0.0) throw ConfigError("ModulationSchedule: period must be positive");
    if (direction != 1 && direction != -1)
        throw ConfigError("ModulationSchedule: direction must be +1 or -1");
    for (const auto& [k, l] : modulated_couplings) {
        if (k < 1 || l < 1 || k > config.n_qubits || l > config.n_qubits || k >= l)
            throw ConfigError("ModulationSchedule: modulated pair out of range");
    }
    const double clearance = schedule_ep_clearance(*this);
    if (clearance < kEpScheduleRadius)
        throw ConfigError("ModulationSchedule: loop passes within " +
                          std::to_string(kEpScheduleRadius) + " of the EP (0, 1); clearance " +
                          std::to_string(clearance));
}

SchedulePoint schedule_eval(const ModulationSchedule& s, double t) {
    double x, y;
    control_point(s, t, x, y);
    if (std::hypot(x, y - 1.0) < kEpScheduleRadius)
        throw DivergentFieldError("schedule_eval: loop point (" + std::to_string(x) + ", " +
                                  std::to_string(y) + ") inside the EP exclusion disk");
    return {field_point(s.config, x, y), couplings_at(s, t)};
}

double schedule_ep_clearance(const ModulationSchedule& s, int samples) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= samples; ++i) {
        double x, y;
        control_point(s, s.period * i / samples, x, y);
        best = std::min(best, std::hypot(x, y - 1.0));
    }
    return best;
}

EigenSystem initial_basis(const ModulationSchedule& s, double epsilon) {
    const SchedulePoint p0 = schedule_eval(s, 0.0);
    const HamiltonianTerms terms(s.config);
    ComplexMatrix h0;
    terms.assemble(p0.field, p0.couplings, epsilon, h0);
    const std::vector<cvector> labels = analytic_product_basis(s.config, p0.field);
    EigenOptions opts;
    opts.label_basis = &labels;
    return eigensystem_sorted(h0, nullptr, opts);
}

std::vector<Trajectory> evolve_many(const ModulationSchedule& s,
                                    const std::vector<cvector>& initial_states,
                                    const EvolveOptions& opts) {
    if (opts.steps < 1) throw ConfigError("evolve: steps must be >= 1");
    if (opts.samples < 1) throw ConfigError("evolve: samples must be >= 1");
    const int dim = s.config.dim();
    for (const auto& v : initial_states)
        if (static_cast<int>(v.size()) != dim)
            throw ConfigError("evolve: initial state dimension mismatch");

    const EigenSystem basis = initial_basis(s, opts.epsilon);
    const HamiltonianTerms terms(s.config);
    const double h = s.period / static_cast<double>(opts.steps);
    const int samples = static_cast<int>(std::min<long>(opts.samples, opts.steps));
    const std::size_t m = initial_states.size();

    std::vector<cvector> psi = initial_states;
    std::vector<Trajectory> trajs(m);

    ComplexMatrix h_cur, h_mid, h_next;
    {
        const SchedulePoint p = schedule_eval(s, 0.0);
        terms.assemble(p.field, p.couplings, opts.epsilon, h_cur);
    }

    cvector g1(dim), g2(dim), g3(dim), g4(dim), u(dim);

    auto record = [&](long step_index) {
        const double t = step_index * h;
        const SchedulePoint p = schedule_eval(s, std::min(t, s.period));
        const ComplexMatrix eta = build_metric(s.config, p.field);
        for (std::size_t q = 0; q < m; ++q) {
            Trajectory& tr = trajs[q];
            tr.times.push_back(t);
            const cvector& v = psi[q];
            const double nrm = vec_norm(v);
            tr.state_norms.push_back(nrm);
            const cvector ev = eta.apply(v);
            tr.eta_norms.push_back(vec_dot(v, ev).real());
            std::vector<double> fid(dim, 0.0);
            if (nrm > 0.0) {
                for (int k = 0; k < dim; ++k) {
                    const cplx ov = vec_dot(basis.right_vectors[k], v) / nrm;
                    fid[k] = std::norm(ov);
                }
            }
            tr.fidelities.push_back(std::move(fid));
            if (opts.record_states) tr.states.push_back(v);
        }
    };

    // Sample step indices: `samples` uniform intervals across the period.
    long next_sample = 0;
    int sample_count = 0;
    auto sample_step_index = [&](int j) {
        return static_cast<long>(std::llround(static_cast<double>(j) * opts.steps / samples));
    };

    for (long step = 0; step <= opts.steps; ++step) {
        if (step == next_sample) {
            record(step);
            ++sample_count;
            next_sample = sample_step_index(sample_count);
        }
        if (step == opts.steps) break;
        const double t = step * h;
        const SchedulePoint pm = schedule_eval(s, t + 0.5 * h);
        const SchedulePoint pn = schedule_eval(s, t + h);
        terms.assemble(pm.field, pm.couplings, opts.epsilon, h_mid);
        terms.assemble(pn.field, pn.couplings, opts.epsilon, h_next);

        const cplx a_half = kMinusI * (0.5 * h);
        const cplx a_full = kMinusI * h;
        const cplx a_sixth = kMinusI * (h / 6.0);
        for (std::size_t q = 0; q < m; ++q) {
            cvector& v = psi[q];
            kernels::matvec(dim, h_cur.data(), v.data(), g1.data());
            kernels::xpay(dim, v.data(), a_half, g1.data(), u.data());
            kernels::matvec(dim, h_mid.data(), u.data(), g2.data());
            kernels::xpay(dim, v.data(), a_half, g2.data(), u.data());
            kernels::matvec(dim, h_mid.data(), u.data(), g3.data());
            kernels::xpay(dim, v.data(), a_full, g3.data(), u.data());
            kernels::matvec(dim, h_next.data(), u.data(), g4.data());
            kernels::rk4_combine(dim, v.data(), a_sixth, g1.data(), g2.data(), g3.data(),
                                 g4.data(), v.data());
            const double nrm = kernels::norm2(dim, v.data());
            if (!(nrm < 1e6))
                throw StepUnstableError("evolve: state norm " + std::to_string(nrm) +
                                        " at t = " + std::to_string(t + h));
        }
        std::swap(h_cur, h_next);
    }
    return trajs;
}

Trajectory evolve(const ModulationSchedule& s, const cvector& initial_state,
                  const EvolveOptions& opts) {
    return evolve_many(s, {initial_state}, opts)[0];
}

Permutation PermutationOutcome::permutation() const {
    return Permutation::from_images(mapping);
}

PermutationOutcome extract_permutation(const ModulationSchedule& s, const EvolveOptions& opts,
                                       double threshold, int threads) {
    if (!(threshold > 0.5 && threshold <= 1.0))
        throw ConfigError("extract_permutation: threshold must lie in (0.5, 1]");
    const int dim = s.config.dim();
    const EigenSystem basis = initial_basis(s, opts.epsilon);

    std::vector<cvector> initials(dim);
    for (int k = 0; k < dim; ++k) initials[k] = basis.right_vectors[k];

    std::vector<Trajectory> trajs(dim);
    const int nthreads = std::max(1, std::min<int>(threads, dim));
    if (nthreads == 1) {
        trajs = evolve_many(s, initials, opts);
    } else {
        std::vector<std::future<std::vector<Trajectory>>> futs;
        const int chunk = (dim + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int b = t * chunk, e = std::min(dim, b + chunk);
            if (b >= e) break;
            std::vector<cvector> part(initials.begin() + b, initials.begin() + e);
            futs.push_back(std::async(std::launch::async, [&s, &opts, part] {
                return evolve_many(s, part, opts);
            }));
        }
        std::size_t at = 0;
        for (auto& f : futs)
            for (auto& tr : f.get()) trajs[at++] = std::move(tr);
    }

    PermutationOutcome out;
    out.mapping.resize(dim);
    out.confidences.resize(dim);
    for (int k = 0; k < dim; ++k) {
        const std::vector<double>& final_fid = trajs[k].fidelities.back();
        const int argmax =
            static_cast<int>(std::max_element(final_fid.begin(), final_fid.end()) -
                             final_fid.begin());
        out.mapping[k] = argmax + 1;
        out.confidences[k] = final_fid[argmax];
    }
    std::vector<int> hits(dim, 0);
    for (int v : out.mapping) ++hits[v - 1];
    const bool bijective = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
    const double min_conf = *std::min_element(out.confidences.begin(), out.confidences.end());
    if (!bijective) {
        out.reason = "not_bijective";
    } else if (min_conf < threshold) {
        out.reason = "low_confidence";
    } else {
        out.valid = true;
    }
    return out;
}

ChiralityReport chirality_probe(const ModulationSchedule& s, double epsilon,
                                const EvolveOptions& opts, double threshold, int threads) {
    EvolveOptions o = opts;
    o.epsilon = epsilon;
    ModulationSchedule fwd = s, bwd = s;
    fwd.direction = 1;
    bwd.direction = -1;
    ChiralityReport rep;
    rep.forward = extract_permutation(fwd, o, threshold, threads);
    rep.backward = extract_permutation(bwd, o, threshold, threads);
    rep.directions_agree = rep.forward.mapping == rep.backward.mapping;
    rep.min_fidelity_forward =
        *std::min_element(rep.forward.confidences.begin(), rep.forward.confidences.end());
    rep.min_fidelity_backward =
        *std::min_element(rep.backward.confidences.begin(), rep.backward.confidences.end());
    return rep;
}

double detrended_peak_to_peak(const std::vector<double>& series, std::size_t begin,
                              std::size_t end, std::size_t half_window) {
    if (end > series.size()) end = series.size();
    if (begin >= end) return 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = begin; i < end; ++i) {
        const std::size_t wb = (i > begin + half_window) ? i - half_window : begin;
        const std::size_t we = std::min(end, i + half_window + 1);
        double mean = 0.0;
        for (std::size_t j = wb; j < we; ++j) mean += series[j];
        mean /= static_cast<double>(we - wb);
        const double r = series[i] - mean;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return hi - lo;
}

StiffnessReport stiffness_probe(const SystemConfig& config, double circle_radius,
                                std::pair<double, double> ellipse, double period,
                                const EvolveOptions& opts, int threads) {
    ModulationSchedule circle;
    circle.config = config;
    circle.r_x = circle_radius;
    circle.r_y = circle_radius;
    circle.period = period;
    ModulationSchedule ell = circle;
    ell.r_x = ellipse.first;
    ell.r_y = ellipse.second;

    StiffnessReport rep;
    const int dim = config.dim();
    auto run = [&](const ModulationSchedule& s, PermutationOutcome& outcome) {
        const EigenSystem basis = initial_basis(s, opts.epsilon);
        std::vector<cvector> initials(dim);
        for (int k = 0; k < dim; ++k) initials[k] = basis.right_vectors[k];
        const std::vector<Trajectory> trajs = evolve_many(s, initials, opts);

        outcome.mapping.resize(dim);
        outcome.confidences.resize(dim);
        for (int k = 0; k < dim; ++k) {
            const std::vector<double>& fid = trajs[k].fidelities.back();
            const int argmax =
                static_cast<int>(std::max_element(fid.begin(), fid.end()) - fid.begin());
            outcome.mapping[k] = argmax + 1;
            outcome.confidences[k] = fid[argmax];
        }
        std::vector<int> hits(dim, 0);
        for (int v : outcome.mapping) ++hits[v - 1];
        outcome.valid = std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
        if (!outcome.valid) outcome.reason = "not_bijective";

        std::vector<double> osc(dim, 0.0);
        for (int k = 0; k < dim; ++k) {
            const std::size_t n = trajs[k].times.size();
            const std::size_t begin = n / 2;
            // Baseline window well below the trend scale but above the fast
            // oscillation period, so the LZ step itself detrends away.
            const std::size_t halfw = std::max<std::size_t>(3, n / 250);
            std::vector<double> series(n);
            for (int ch = 0; ch < dim; ++ch) {
                for (std::size_t i = 0; i < n; ++i) series[i] = trajs[k].fidelities[i][ch];
                osc[k] = std::max(osc[k], detrended_peak_to_peak(series, begin, n, halfw));
            }
        }
        return osc;
    };
    rep.circle_oscillation = run(circle, rep.circle_outcome);
    rep.ellipse_oscillation = run(ell, rep.ellipse_outcome);
    (void)threads;
    return rep;
}

}  // namespace epsim
