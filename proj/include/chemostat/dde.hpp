#ifndef CHEMOSTAT_DDE_HPP
#define CHEMOSTAT_DDE_HPP

#include <stdexcept>
#include <vector>

#include "chemostat/model.hpp"
#include "chemostat/series.hpp"

namespace chemostat {

/// Raised when the state leaves the finite/non-negative region; blame_time
/// is the first grid time at which it happened.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double blame_time)
        : std::runtime_error(what), blame_time_(blame_time) {}
    double blame_time() const { return blame_time_; }

private:
    double blame_time_;
};

/// Solution of the delayed chemostat system on a uniform grid. Node 0 sits
/// at t = -tau; the history occupies the first n_hist+1 nodes. I is the
/// cumulative washout integral, I(t) = int_0^t D, extended to [-tau,0) with
/// the backward-constant convention D(t) = D(max(t,0)).
struct Trajectory {
    double h = 0.0;
    double tau = 0.0;
    std::size_t n_hist = 0; // tau/h
    std::vector<double> t, s, x, I;
    std::vector<double> ds, dx, dI; // nodal slopes (RHS values)

    std::size_t zero_index() const { return n_hist; }
    double t_end() const { return t.back(); }

    // interpolated access for t in [-tau, t_end]
    double s_at(double time) const;
    double x_at(double time) const;
    double I_at(double time) const;

private:
    double interp(const std::vector<double>& v, const std::vector<double>& dv,
                  double time) const;
};

/// Proof-side diagnostics: stored nutrient y, the trajectory weight psi,
/// and the conservation defect z - s - x - y.
struct DiagnosticSeries {
    SampledSeries y;
    SampledSeries psi;
    SampledSeries defect;
};

struct PsiResult {
    SampledSeries psi;     // on [0, t_end - tau]
    double identity_residual = 0.0; // max |psi(t) - exp(-int_{t-tau}^t p(s) psi)|
};

/// Method-of-steps RK4 for the delayed system. Requires h | tau when
/// tau > 0 so delayed reads land on grid nodes; RK4 midpoint stages use
/// cubic Hermite interpolation between the bracketing nodes.
Trajectory integrate(const ChemostatModel& model, const History& h0,
                     double t_end, double h);

/// Stored-nutrient series y(t) on [0, t_end], trapezoid on the grid.
SampledSeries compute_y(const Trajectory& traj, const ChemostatModel& model);

/// Defect z - s - x - y with z the washout solution started at z0.
/// Contract: |defect(t)| = |defect(0)| e^{-I(t)} up to integrator error.
SampledSeries conservation_defect(const Trajectory& traj,
                                  const ChemostatModel& model, double z0);

/// psi(t) = x(t)/x(t+tau) e^{-(I(t+tau)-I(t))}, with the self-consistency
/// residual psi = exp(-int p(s) psi) reported alongside.
PsiResult compute_psi(const Trajectory& traj, const ChemostatModel& model);

/// Max over sampled (t1,t2) pairs of
/// |ln x(t2) - ln x(t1) - int_{t1}^{t2} (p(s(t-tau)) psi(t-tau) - D(t)) dt|.
double log_growth_identity(const Trajectory& traj, const ChemostatModel& model);

} // namespace chemostat

#endif
