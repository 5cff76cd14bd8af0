#ifndef CHEMOSTAT_WASHOUT_HPP
#define CHEMOSTAT_WASHOUT_HPP

#include <vector>

#include "chemostat/model.hpp"
#include "chemostat/series.hpp"

namespace chemostat {

/// Organism-free nutrient solution z together with the cumulative washout
/// integral I(t) = int_0^t D on the same grid. When periodic is set, z_at
/// and I_at extend beyond [0, omega] by exact wrapping (I picks up one
/// I(omega) per period); otherwise queries left of 0 use the
/// backward-constant convention D(t) = D(max(t,0)).
struct WashoutSolution {
    SampledSeries z;
    SampledSeries I;
    double z0 = 0.0;
    bool closed_form_used = true;
    double method_agreement = 0.0; // max |closed form - RK4| over the grid
    bool periodic = false;
    double omega = 0.0;
    double D0 = 0.0;

    double z_at(double t) const;
    double I_at(double t) const;
};

/// Auxiliary linear-delay solution c, stored as raw values plus a per-node
/// log offset so long horizons cannot overflow: ln c(t_k) = ln raw[k] + logshift[k].
struct CSolution {
    SampledSeries c; // raw values, first node at t = -tau
    std::vector<double> logshift;
    double tau = 0.0;
    double h = 0.0;
    std::size_t n_hist = 0;

    double log_at(std::size_t k) const;
};

enum class PhiRegime { transient, periodic, constant };

/// The inherent weight function phi = c(t)/c(t+tau) e^{-int D}. Image in
/// (0,1]; residual is the max defect of phi = exp(-int phi p(z)).
struct PhiFunction {
    PhiRegime regime = PhiRegime::transient;
    double omega = 0.0;
    SampledSeries phi;   // transient: [0, T-tau]; periodic: one period [0, omega]
    SampledSeries log_c; // ln c on [0, T], transient regime only
    double residual = 0.0;
    double constant_value = 1.0;            // constant regime
    std::vector<double> convergence_trace;  // periodic: sup-norm period diffs

    double at(double t) const;
};

/// z by the closed form (default) cross-checked against RK4 on z' = (s0-z)D;
/// throws if the two disagree by more than 1e-6.
WashoutSolution washout_solution(const ChemostatModel& model, double z0,
                                 double t_end, double h);

/// The unique omega-periodic z, via the closed-form periodicity condition
/// for z(0). Requires int_0^omega D > 0.
WashoutSolution periodic_washout(const ChemostatModel& model, double omega,
                                 double h);

/// Constant history for c (the default seed, value at every node).
SampledSeries constant_c_history(double tau, double h, double value);

/// Method-of-steps RK4 for c' = -D c + c(t-tau) p(z(t-tau)) e^{-int_{t-tau}^t D}.
/// Requires c_history >= 0 with c(0) > 0; h must divide tau.
CSolution c_solution(const ChemostatModel& model, const WashoutSolution& z,
                     const SampledSeries& c_history, double t_total, double h);

/// phi per its definition, with the self-consistency residual validated.
PhiFunction phi_from_c(const CSolution& c, const ChemostatModel& model,
                       const WashoutSolution& z, double max_residual = 1e-3);

/// Periodic phi by iterating period-shifted restrictions of psi to their
/// Cauchy limit; tol bounds the terminal sup-norm difference.
PhiFunction phi_periodic(const ChemostatModel& model, const WashoutSolution& z,
                         double omega, double tol);

/// Unique root of phi = e^{-P tau phi} in (0,1], bisection to 1e-12.
double phi_constant(double P, double tau);

} // namespace chemostat

#endif
