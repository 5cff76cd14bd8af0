#ifndef CHEMOSTAT_CRITERIA_HPP
#define CHEMOSTAT_CRITERIA_HPP

#include <string>
#include <vector>

#include "chemostat/dde.hpp"
#include "chemostat/model.hpp"
#include "chemostat/washout.hpp"

namespace chemostat {

enum class Verdict { persistent, not_persistent, inconclusive };

std::string verdict_name(Verdict v);

struct WindowSample {
    double t1, t2, lhs, rhs;
};

/// Auditable result of one criterion evaluation. margin is the decisive
/// quantity for the criterion (average gap, minimal window gap, ...);
/// windows carries the sampled window integrals where applicable.
struct CriterionReport {
    std::string criterion;
    Verdict verdict = Verdict::inconclusive;
    double margin = 0.0;
    double eta = 0.0;
    double T = 0.0;
    double avg_pzphi = 0.0;
    double avg_D = 0.0;
    std::vector<WindowSample> windows;
    std::size_t windows_sampled = 0;
    std::vector<std::string> notes;
};

struct ClassifyResult {
    Verdict verdict = Verdict::inconclusive;
    double delta_hat = 0.0; // min of x over the tail
    double x_end = 0.0;
    std::vector<std::string> notes;
};

/// Constant-inputs criterion: persistent iff p(s0) e^{-D tau} > D. Also
/// reports the equivalent p(s0) phi* - D margin.
CriterionReport check_constant(const ChemostatModel& model);

/// Periodic average criterion: persistent iff <p(z) phi> > <D>, with the
/// unique periodic z and phi built internally.
CriterionReport check_periodic(const ChemostatModel& model, double omega);

/// Window scan of int p(z(t-tau)) phi(t-tau) vs int (D + eta) over all
/// stride-grid pairs (t1, t2) with t1 > T, t2 - t1 > T, t2 <= horizon.
CriterionReport check_window(const ChemostatModel& model,
                             const WashoutSolution& z, const PhiFunction& phi,
                             double eta, double T, double horizon,
                             double stride);

/// Geometric-ladder search for a witness pair (eta, T) making every sampled
/// window pass. not-found is a verdict, not an error.
CriterionReport search_eta_T(const ChemostatModel& model,
                             const WashoutSolution& z, const PhiFunction& phi,
                             double horizon, double stride);

/// Necessary-only window scan with weight e^{-int_{t-tau}^t D} in place of
/// phi. Outside the constant-s0 hypothesis it still evaluates, with a
/// warning note.
CriterionReport check_necessary_exp(const ChemostatModel& model,
                                    const WashoutSolution& z, double eta,
                                    double T, double horizon, double stride);

/// Tail-based classification of a simulated trajectory.
ClassifyResult classify_trajectory(const Trajectory& traj, double tail_fraction,
                                   double threshold);

/// Default window stride: omega/8 if periodic inputs, else tau, else 1.
double default_stride(const ChemostatModel& model);

} // namespace chemostat

#endif
