#include "chemostat/washout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chemostat/quadrature.hpp"

namespace chemostat {

namespace {

double hermite(double v0, double v1, double d0, double d1, double h, double theta) {
    double t2 = theta * theta, t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + theta) * h * d0 +
           (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * h * d1;
}

// Closed-form z recurrence (Eq. z(t) = z(0) e^{-int D} + int s0 D e^{-int D}),
// advanced step by step so no exponential ever overflows. Also accumulates I.
WashoutSolution closed_form_run(const ChemostatModel& model, double z0,
                                double t_end, double h) {
    const auto n = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
    WashoutSolution w;
    w.z0 = z0;
    w.D0 = model.D.eval(0.0);
    w.z.t0 = w.I.t0 = 0.0;
    w.z.h = w.I.h = h;
    w.z.v.resize(n + 1);
    w.I.v.resize(n + 1);
    w.z.dv.resize(n + 1);
    w.I.dv.resize(n + 1);
    w.z.v[0] = z0;
    w.I.v[0] = 0.0;

    auto f = [&](double t) { return model.D.eval(t); };
    for (std::size_t k = 0; k < n; ++k) {
        const double a = h * static_cast<double>(k);
        double q[5]; // int_a^{a+i h/4} D
        q[0] = 0.0;
        for (int i = 1; i <= 4; ++i)
            q[i] = simpson_fixed(f, a, a + i * h / 4.0, 4);
        double wgt[5];
        for (int i = 0; i <= 4; ++i) {
            double t = a + i * h / 4.0;
            wgt[i] = model.s0.eval(t) * model.D.eval(t) * std::exp(q[i] - q[4]);
        }
        double forcing = (h / 12.0) * (wgt[0] + 4 * wgt[1] + 2 * wgt[2] + 4 * wgt[3] + wgt[4]);
        w.z.v[k + 1] = w.z.v[k] * std::exp(-q[4]) + forcing;
        w.I.v[k + 1] = w.I.v[k] + q[4];
    }
    for (std::size_t k = 0; k <= n; ++k) {
        double t = h * static_cast<double>(k);
        double Dt = model.D.eval(t);
        w.I.dv[k] = Dt;
        w.z.dv[k] = (model.s0.eval(t) - w.z.v[k]) * Dt;
    }
    return w;
}

// RK4 on z' = (s0 - z) D, for the cross-method check.
std::vector<double> rk4_run(const ChemostatModel& model, double z0,
                            std::size_t n, double h) {
    std::vector<double> z(n + 1);
    z[0] = z0;
    auto f = [&](double t, double zz) {
        return (model.s0.eval(t) - zz) * model.D.eval(t);
    };
    for (std::size_t k = 0; k < n; ++k) {
        double t = h * static_cast<double>(k);
        double k1 = f(t, z[k]);
        double k2 = f(t + 0.5 * h, z[k] + 0.5 * h * k1);
        double k3 = f(t + 0.5 * h, z[k] + 0.5 * h * k2);
        double k4 = f(t + h, z[k] + h * k3);
        z[k + 1] = z[k] + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return z;
}

} // namespace

double WashoutSolution::z_at(double t) const {
    if (periodic) {
        double r = t - std::floor(t / omega) * omega;
        if (r >= omega) r -= omega;
        return z.at(r);
    }
    if (t < 0.0) return z.v.front();
    return z.at(t);
}

double WashoutSolution::I_at(double t) const {
    if (periodic) {
        double k = std::floor(t / omega);
        double r = t - k * omega;
        if (r >= omega) { r -= omega; k += 1.0; }
        return k * I.v.back() + I.at(r);
    }
    if (t < 0.0) return t * D0;
    return I.at(t);
}

WashoutSolution washout_solution(const ChemostatModel& model, double z0,
                                 double t_end, double h) {
    if (!(z0 > 0.0)) throw std::invalid_argument("washout_solution: z0 must be positive");
    if (!(t_end > 0.0) || !(h > 0.0))
        throw std::invalid_argument("washout_solution: bad grid");
    WashoutSolution w = closed_form_run(model, z0, t_end, h);
    std::vector<double> zrk = rk4_run(model, z0, w.z.v.size() - 1, h);
    double diff = 0.0, scale = 1.0;
    for (std::size_t k = 0; k < zrk.size(); ++k) {
        diff = std::max(diff, std::abs(zrk[k] - w.z.v[k]));
        scale = std::max(scale, std::abs(w.z.v[k]));
    }
    w.method_agreement = diff;
    if (diff > 1e-6 * scale)
        throw std::runtime_error("washout_solution: closed form and RK4 disagree; refine the grid");
    return w;
}

WashoutSolution periodic_washout(const ChemostatModel& model, double omega,
                                 double h) {
    if (!(omega > 0.0)) throw std::invalid_argument("periodic_washout: omega must be positive");
    auto n = static_cast<std::size_t>(std::ceil(omega / h - 1e-9));
    n = std::max<std::size_t>(n, 64);
    const double hz = omega / static_cast<double>(n);

    // Homogeneous forcing A = z(omega) when z(0) = 0, then the periodicity
    // condition z(0) = A / (1 - e^{-I(omega)}).
    WashoutSolution hom = closed_form_run(model, 0.0, omega, hz);
    const double I_omega = hom.I.v.back();
    if (!(I_omega > 1e-12))
        throw std::runtime_error("periodic_washout: degenerate washout (int_0^omega D = 0)");
    const double z0 = hom.z.v.back() / (1.0 - std::exp(-I_omega));

    WashoutSolution w = closed_form_run(model, z0, omega, hz);
    w.periodic = true;
    w.omega = omega;
    if (std::abs(w.z.v.back() - w.z.v.front()) > 1e-8)
        throw std::runtime_error("periodic_washout: periodicity condition not met");
    return w;
}

SampledSeries constant_c_history(double tau, double h, double value) {
    SampledSeries s;
    s.t0 = -tau;
    s.h = h;
    auto n = tau > 0.0 ? static_cast<std::size_t>(std::llround(tau / h)) : 0;
    s.v.assign(n + 1, value);
    return s;
}

double CSolution::log_at(std::size_t k) const {
    if (!(c.v[k] > 0.0)) throw std::domain_error("CSolution: c not positive");
    return std::log(c.v[k]) + logshift[k];
}

CSolution c_solution(const ChemostatModel& model, const WashoutSolution& z,
                     const SampledSeries& c_history, double t_total, double h) {
    const double tau = model.tau;
    std::size_t nh = 0;
    if (tau > 0.0) {
        double ratio = tau / h;
        nh = static_cast<std::size_t>(std::llround(ratio));
        if (nh == 0 || std::abs(ratio - static_cast<double>(nh)) > 1e-9 * ratio)
            throw std::invalid_argument("c_solution: step h must divide tau");
    }
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_total / h - 1e-9));
    const std::size_t n_nodes = nh + n_steps + 1;

    CSolution cs;
    cs.tau = tau;
    cs.h = h;
    cs.n_hist = nh;
    cs.c.t0 = -tau;
    cs.c.h = h;
    cs.c.v.resize(n_nodes);
    cs.c.dv.resize(n_nodes);
    cs.logshift.assign(n_nodes, 0.0);

    for (std::size_t k = 0; k <= nh; ++k) {
        double t = -tau + h * static_cast<double>(k);
        double v = c_history.at(std::min(t, 0.0));
        if (!(v >= 0.0)) throw std::domain_error("c_solution: c history must be non-negative");
        cs.c.v[k] = v;
        cs.c.dv[k] = 0.0;
    }
    if (!(cs.c.v[nh] > 0.0)) throw std::domain_error("c_solution: c(0) must be positive");
    // history slopes (piecewise-linear data)
    for (std::size_t k = 0; k < nh; ++k)
        cs.c.dv[k] = (cs.c.v[k + 1] - cs.c.v[k]) / h;

    auto pz = [&](double t) { return model.p.eval(std::max(z.z_at(t), 0.0)); };
    auto weight = [&](double ts) {
        return std::exp(-(z.I_at(ts) - z.I_at(ts - tau)));
    };
    auto c_delayed = [&](double td) {
        double u = (td + tau) / h;
        auto i = static_cast<std::size_t>(std::floor(u + 1e-9));
        double theta = u - static_cast<double>(i);
        if (std::abs(theta) < 1e-9) return cs.c.v[i];
        return hermite(cs.c.v[i], cs.c.v[i + 1], cs.c.dv[i], cs.c.dv[i + 1], h, theta);
    };
    auto rhs = [&](double ts, double cc) {
        if (tau == 0.0) return (-model.D.eval(ts) + pz(ts)) * cc;
        return -model.D.eval(ts) * cc + c_delayed(ts - tau) * pz(ts - tau) * weight(ts);
    };

    cs.c.dv[nh] = rhs(0.0, cs.c.v[nh]);
    double offset = 0.0;
    for (std::size_t k = nh; k + 1 < n_nodes; ++k) {
        double t = -tau + h * static_cast<double>(k);
        double cc = cs.c.v[k];
        double k1 = rhs(t, cc);
        double k2 = rhs(t + 0.5 * h, cc + 0.5 * h * k1);
        double k3 = rhs(t + 0.5 * h, cc + 0.5 * h * k2);
        double k4 = rhs(t + h, cc + h * k3);
        double cn = cc + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (!std::isfinite(cn))
            throw std::runtime_error("c_solution: non-finite c");
        if (!(cn > 0.0))
            throw std::runtime_error("c_solution: c lost positivity; refine the grid");
        cs.c.v[k + 1] = cn;
        cs.logshift[k + 1] = offset;
        cs.c.dv[k + 1] = rhs(t + h, cn);

        // renormalize the active window if the raw value drifts too far;
        // only legal while the whole window shares one offset
        if (cn > 1e120 || cn < 1e-120) {
            std::size_t lo = (k + 1 >= nh) ? k + 1 - nh : 0;
            bool uniform = true;
            for (std::size_t j = lo; j <= k + 1; ++j)
                if (cs.logshift[j] != offset) { uniform = false; break; }
            if (uniform) {
                double gamma = 1.0 / cn;
                double new_offset = offset - std::log(gamma);
                for (std::size_t j = lo; j <= k + 1; ++j) {
                    cs.c.v[j] *= gamma;
                    cs.c.dv[j] *= gamma;
                    cs.logshift[j] = new_offset;
                }
                offset = new_offset;
            }
        }
    }
    return cs;
}

PhiFunction phi_from_c(const CSolution& c, const ChemostatModel& model,
                       const WashoutSolution& z, double max_residual) {
    const std::size_t nh = c.n_hist;
    const std::size_t total = c.c.v.size();
    const double h = c.h;
    const double tau = c.tau;

    PhiFunction pf;
    pf.regime = PhiRegime::transient;
    pf.phi.t0 = 0.0;
    pf.phi.h = h;
    pf.log_c.t0 = 0.0;
    pf.log_c.h = h;
    pf.log_c.v.resize(total - nh);
    pf.log_c.dv.resize(total - nh);
    for (std::size_t i = 0; i + nh < total; ++i) {
        pf.log_c.v[i] = c.log_at(nh + i);
        pf.log_c.dv[i] = c.c.dv[nh + i] / c.c.v[nh + i];
    }

    if (tau == 0.0) {
        pf.phi.v.assign(total, 1.0);
        pf.phi.dv.assign(total, 0.0);
        pf.residual = 0.0;
        return pf;
    }
    if (total < 2 * nh + 1)
        throw std::invalid_argument("phi_from_c: c horizon shorter than tau");

    const std::size_t n = total - 2 * nh; // phi nodes on [0, T - tau]
    pf.phi.v.resize(n);
    pf.phi.dv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = h * static_cast<double>(i);
        double val = std::exp(c.log_at(nh + i) - c.log_at(nh + i + nh) -
                              (z.I_at(t + tau) - z.I_at(t)));
        if (!(val > 0.0) || val > 1.0 + 1e-9)
            throw std::runtime_error("phi_from_c: phi escaped (0,1]");
        pf.phi.v[i] = std::min(val, 1.0);
    }
    auto pz = [&](double t) { return model.p.eval(std::max(z.z_at(t), 0.0)); };
    for (std::size_t i = 0; i < n; ++i) {
        double t = h * static_cast<double>(i);
        std::size_t k = nh + i;
        // d/dt phi = phi (c'/c (t) - c'/c (t+tau) - (D(t+tau) - D(t)))
        pf.phi.dv[i] = pf.phi.v[i] *
                       (c.c.dv[k] / c.c.v[k] - c.c.dv[k + nh] / c.c.v[k + nh] -
                        (model.D.eval(t + tau) - model.D.eval(t)));
    }

    // self-consistency: phi(t) = exp(-int_{t-tau}^t phi p(z))
    std::vector<double> pref(n, 0.0); // trapezoid prefix of phi p(z)
    std::vector<double> integ(n);
    for (std::size_t i = 0; i < n; ++i)
        integ[i] = pf.phi.v[i] * pz(h * static_cast<double>(i));
    for (std::size_t i = 1; i < n; ++i)
        pref[i] = pref[i - 1] + 0.5 * h * (integ[i - 1] + integ[i]);
    double res = 0.0;
    for (std::size_t i = nh; i < n; ++i)
        res = std::max(res, std::abs(pf.phi.v[i] - std::exp(-(pref[i] - pref[i - nh]))));
    pf.residual = res;
    if (res > max_residual)
        throw std::runtime_error("phi_from_c: self-consistency residual above tolerance; refine the grid");
    return pf;
}

PhiFunction phi_periodic(const ChemostatModel& model, const WashoutSolution& z,
                         double omega, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("phi_periodic: tol must be positive");
    if (!z.periodic || std::abs(z.omega - omega) > 1e-9 * omega)
        throw std::invalid_argument("phi_periodic: z must be the periodic washout solution");
    const double tau = model.tau;
    const std::size_t K = 512;

    PhiFunction pf;
    pf.regime = PhiRegime::periodic;
    pf.omega = omega;
    pf.phi.t0 = 0.0;
    pf.phi.h = omega / static_cast<double>(K);
    if (tau == 0.0) {
        pf.phi.v.assign(K + 1, 1.0);
        pf.phi.dv.assign(K + 1, 0.0);
        pf.residual = 0.0;
        pf.constant_value = 1.0;
        return pf;
    }

    // grid: h divides tau and is no coarser than omega/1024
    auto m = static_cast<std::size_t>(std::ceil(std::max(16.0, 1024.0 * tau / omega)));
    const double h = tau / static_cast<double>(m);
    const double I_omega = z.I.v.back();
    auto n_periods = static_cast<std::size_t>(
        std::max(20.0, std::ceil(30.0 / std::max(I_omega, 1e-12))));
    const double t_total = static_cast<double>(n_periods) * omega + tau + 2.0 * h;

    SampledSeries hist = constant_c_history(tau, h, 1.0);
    CSolution cs = c_solution(model, z, hist, t_total, h);
    PhiFunction base = phi_from_c(cs, model, z, 1.0);

    auto sample = [&](std::size_t n_shift, std::vector<double>& out) {
        out.resize(K + 1);
        for (std::size_t j = 0; j <= K; ++j) {
            double t = static_cast<double>(j) * omega / static_cast<double>(K) +
                       static_cast<double>(n_shift) * omega;
            out[j] = base.phi.at(t);
        }
    };

    std::vector<double> prev, cur;
    sample(0, prev);
    bool converged = false;
    for (std::size_t n = 1; n < n_periods; ++n) {
        sample(n, cur);
        double d = 0.0;
        for (std::size_t j = 0; j <= K; ++j)
            d = std::max(d, std::abs(cur[j] - prev[j]));
        pf.convergence_trace.push_back(d);
        prev.swap(cur);
        if (d < tol) { // further periods only add roundoff jitter
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error("phi_periodic: period iteration did not converge within the horizon");

    // take the last computed period and wrap it exactly
    pf.phi.v = prev;
    double seam = 0.5 * (pf.phi.v.front() + pf.phi.v.back());
    pf.phi.v.front() = pf.phi.v.back() = seam;

    // slopes from the self-consistency identity, with wrapped lookups
    auto wrap_at = [&](double t) {
        double r = t - std::floor(t / omega) * omega;
        if (r >= omega) r -= omega;
        return pf.phi.at(r);
    };
    auto pz = [&](double t) { return model.p.eval(std::max(z.z_at(t), 0.0)); };
    pf.phi.dv.resize(K + 1);
    for (std::size_t j = 0; j <= K; ++j) {
        double t = static_cast<double>(j) * omega / static_cast<double>(K);
        pf.phi.dv[j] = pf.phi.v[j] * (pz(t - tau) * wrap_at(t - tau) - pz(t) * pf.phi.v[j]);
    }

    // residual of the wrapped function
    double res = 0.0;
    for (std::size_t j = 0; j <= K; ++j) {
        double t = static_cast<double>(j) * omega / static_cast<double>(K);
        auto f = [&](double u) { return pz(u) * wrap_at(u); };
        double integral = simpson_fixed(f, t - tau, t, 256);
        res = std::max(res, std::abs(pf.phi.v[j] - std::exp(-integral)));
    }
    pf.residual = res;
    return pf;
}

double phi_constant(double P, double tau) {
    if (!(P >= 0.0) || !(tau >= 0.0))
        throw std::domain_error("phi_constant: P and tau must be non-negative");
    const double q = P * tau;
    if (q == 0.0) return 1.0;
    double lo = std::exp(-q), hi = 1.0; // g(lo) <= 0 <= g(hi) for g = phi - e^{-q phi}
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double g = mid - std::exp(-q * mid);
        if (g > 0.0) hi = mid; else lo = mid;
        if (hi - lo < 1e-13) break;
    }
    return 0.5 * (lo + hi);
}

double PhiFunction::at(double t) const {
    if (regime == PhiRegime::constant) return constant_value;
    if (regime == PhiRegime::periodic) {
        double r = t - std::floor(t / omega) * omega;
        if (r >= omega) r -= omega;
        return phi.at(r);
    }
    return phi.at(t);
}

} // namespace chemostat
