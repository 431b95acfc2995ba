#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epsim/eigensolver.hpp"
#include "epsim/field.hpp"
#include "epsim/hamiltonian.hpp"
#include "epsim/permutation.hpp"

namespace epsim {

// Loops must clear the twisted EP at (0, 1) by this radius.
inline constexpr double kEpScheduleRadius = 1e-2;

// Closed control loop x(t) = r_x sin(d*w*t + phi_0), y(t) = r_y(1 + cos(d*w*t + phi_0))
// with w = 2*pi/T, plus the cos^2(w*t/2) envelope on the modulated couplings.
struct ModulationSchedule {
    SystemConfig config;
    double r_x = 0.0;
    double r_y = 0.0;
    double period = 2500.0;
    double phi_0 = 3.14159265358979323846;
    int direction = 1;  // +1 counterclockwise, -1 clockwise
    std::set<std::pair<int, int>> modulated_couplings;  // 1-based (k, l) with k < l

    void validate() const;  // throws ConfigError
};

struct SchedulePoint {
    FieldPoint field;
    Couplings couplings;
};

// Instantaneous control point and coupling matrix; throws DivergentFieldError
// inside the EP exclusion disk.
SchedulePoint schedule_eval(const ModulationSchedule& s, double t);

// Minimum distance of the loop from the EP (0, 1), sampled densely.
double schedule_ep_clearance(const ModulationSchedule& s, int samples = 4096);

struct Trajectory {
    std::vector<double> times;
    std::vector<cvector> states;                  // raw (unnormalized) states
    std::vector<std::vector<double>> fidelities;  // [sample][k], against the t=0 eigenbasis
    std::vector<double> eta_norms;                // <psi|eta(t)|psi>, raw state
    std::vector<double> state_norms;
};

struct EvolveOptions {
    long steps = 200000;
    int samples = 1000;
    double epsilon = 0.0;       // sigma_z perturbation on qubit 1
    bool record_states = false;
};

// Classic fixed-step RK4 for i d/dt psi = H(t) psi. Fidelities are taken
// against the eigenbasis of H(0) (including the perturbation), with the
// evolving state renormalized before each overlap. Throws StepUnstableError
// if any state norm exceeds 1e6.
Trajectory evolve(const ModulationSchedule& s, const cvector& initial_state,
                  const EvolveOptions& opts);

// Propagates several initial states together (one Hamiltonian assembly per
// stage); used by the permutation extraction.
std::vector<Trajectory> evolve_many(const ModulationSchedule& s,
                                    const std::vector<cvector>& initial_states,
                                    const EvolveOptions& opts);

// Eigenbasis of H(0) for this schedule, ascending, degenerate clusters
// labeled against the analytic product basis.
EigenSystem initial_basis(const ModulationSchedule& s, double epsilon = 0.0);

struct PermutationOutcome {
    std::vector<int> mapping;          // 1-based: mapping[k-1] = argmax_j fidelity
    std::vector<double> confidences;   // the corresponding final fidelities
    bool valid = false;
    std::string reason;                // "", "not_bijective", "low_confidence"
    Permutation permutation() const;   // throws Error when not bijective
};

PermutationOutcome extract_permutation(const ModulationSchedule& s, const EvolveOptions& opts,
                                       double threshold = 0.9, int threads = 1);

struct ChiralityReport {
    PermutationOutcome forward;   // direction +1
    PermutationOutcome backward;  // direction -1
    bool directions_agree = false;
    double min_fidelity_forward = 0.0;
    double min_fidelity_backward = 0.0;
};

// Runs the extraction in both winding directions under a perturbation.
ChiralityReport chirality_probe(const ModulationSchedule& s, double epsilon,
                                const EvolveOptions& opts, double threshold = 0.9,
                                int threads = 1);

struct StiffnessReport {
    // Detrended peak-to-peak fidelity oscillation in (T/2, T), max over
    // channels, per initial state.
    std::vector<double> circle_oscillation;
    std::vector<double> ellipse_oscillation;
    PermutationOutcome circle_outcome;
    PermutationOutcome ellipse_outcome;
};

StiffnessReport stiffness_probe(const SystemConfig& config, double circle_radius,
                                std::pair<double, double> ellipse, double period,
                                const EvolveOptions& opts, int threads = 1);

// Detrended peak-to-peak amplitude of `series` restricted to [begin, end),
// moving-average baseline with half-window `half_window` samples.
double detrended_peak_to_peak(const std::vector<double>& series, std::size_t begin,
                              std::size_t end, std::size_t half_window);

}  // namespace epsim
