#include "chemostat/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "chemostat/quadrature.hpp"

namespace chemostat {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::persistent: return "persistent";
    case Verdict::not_persistent: return "not-persistent";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

double default_stride(const ChemostatModel& model) {
    if (model.D.is_periodic()) return model.D.period() / 8.0;
    if (model.s0.is_periodic()) return model.s0.period() / 8.0;
    if (model.tau > 0.0) return model.tau;
    return 1.0;
}

CriterionReport check_constant(const ChemostatModel& model) {
    if (!model.s0.is_constant() || !model.D.is_constant())
        throw std::invalid_argument("check_constant: requires constant s0 and D");
    const double D = model.D.constant_value();
    if (!(D > 0.0)) throw std::invalid_argument("check_constant: requires D > 0");
    const double P = model.p.eval(model.s0.constant_value());
    const double lhs = P * std::exp(-D * model.tau);
    const double phi_star = phi_constant(P, model.tau);

    CriterionReport r;
    r.criterion = "constant-threshold";
    r.margin = lhs - D;
    r.avg_pzphi = P * phi_star;
    r.avg_D = D;
    const double band = 1e-9;
    if (r.margin > band) r.verdict = Verdict::persistent;
    else if (r.margin < -band) r.verdict = Verdict::not_persistent;
    else {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("margin within numerical band of the threshold");
    }
    r.notes.push_back("equivalent weighted margin p(s0)*phi - D = " +
                      std::to_string(r.avg_pzphi - D));
    return r;
}

namespace {

void require_commensurate(const TimeFunction& f, double omega, const char* name) {
    if (!f.is_periodic()) return; // constants are omega-periodic for any omega
    double ratio = omega / f.period();
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0)
        throw std::invalid_argument(std::string("check_periodic: ") + name +
                                    " period does not divide omega");
}

} // namespace

CriterionReport check_periodic(const ChemostatModel& model, double omega) {
    if (!(omega > 0.0)) throw std::invalid_argument("check_periodic: omega must be positive");
    require_commensurate(model.s0, omega, "s0");
    require_commensurate(model.D, omega, "D");

    WashoutSolution z = periodic_washout(model, omega, omega / 4096.0);
    PhiFunction phi = phi_periodic(model, z, omega, 1e-8);

    // <p(z) phi> on the phi sample grid (uniform trapezoid over one period)
    const std::size_t K = phi.phi.v.size() - 1;
    double acc = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
        double t = phi.phi.h * static_cast<double>(j);
        acc += model.p.eval(z.z_at(t)) * phi.phi.v[j];
    }
    const double avg_pzphi = acc / static_cast<double>(K);
    const double avg_D = model.D.average(omega);

    CriterionReport r;
    r.criterion = "periodic-average";
    r.avg_pzphi = avg_pzphi;
    r.avg_D = avg_D;
    r.margin = avg_pzphi - avg_D;
    const double band = 1e-5 * std::max(1.0, avg_D);
    if (r.margin > band) r.verdict = Verdict::persistent;
    else if (r.margin < -band) r.verdict = Verdict::not_persistent;
    else {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("average margin below resolution tolerance");
    }
    r.notes.push_back("phi residual " + std::to_string(phi.residual));
    return r;
}

namespace {

// Shared machinery for the window criteria: cumulative integrals of lhs and
// rhs integrands on the stride grid, then an O(1)-per-pair scan.
CriterionReport window_scan(const std::function<double(double)>& lhs_fn,
                            const std::function<double(double)>& rhs_fn,
                            double eta, double T, double horizon, double stride,
                            const std::string& name) {
    if (!(T > 0.0) || !(stride > 0.0))
        throw std::invalid_argument(name + ": T and stride must be positive");
    if (horizon < 2.0 * T + stride)
        throw std::invalid_argument(name + ": insufficient horizon (need > 2T + stride)");

    const auto n = static_cast<std::size_t>(std::floor(horizon / stride + 1e-9));
    std::vector<double> L(n + 1, 0.0), R(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double a = stride * static_cast<double>(i);
        double b = a + stride;
        L[i + 1] = L[i] + simpson_fixed(lhs_fn, a, b, 16);
        R[i + 1] = R[i] + simpson_fixed(rhs_fn, a, b, 16);
    }

    CriterionReport r;
    r.criterion = name;
    r.eta = eta;
    r.T = T;

    const std::size_t window_cap = 5000;
    bool min_set = false;
    double min_margin = 0.0;
    WindowSample min_win{0, 0, 0, 0};
    std::size_t count = 0;
    bool borderline = false;
    for (std::size_t i = 0; i <= n; ++i) {
        double t1 = stride * static_cast<double>(i);
        if (!(t1 > T)) continue;
        for (std::size_t j = i + 1; j <= n; ++j) {
            double t2 = stride * static_cast<double>(j);
            if (!(t2 - t1 > T)) continue;
            double lhs = L[j] - L[i];
            double rhs = R[j] - R[i] + eta * (t2 - t1);
            double margin = lhs - rhs;
            ++count;
            if (!min_set || margin < min_margin) {
                min_set = true;
                min_margin = margin;
                min_win = {t1, t2, lhs, rhs};
            }
            if (std::abs(margin) <= 1e-8 * (t2 - t1) + 1e-9) borderline = true;
            if (count <= window_cap) r.windows.push_back({t1, t2, lhs, rhs});
        }
    }
    r.windows_sampled = count;
    if (count == 0)
        throw std::invalid_argument(name + ": no windows on the stride grid");
    if (count > window_cap) {
        r.windows.clear();
        r.windows.push_back(min_win);
        r.notes.push_back("window list truncated to the minimal-margin window (" +
                          std::to_string(count) + " sampled)");
    }
    r.margin = min_margin;
    if (borderline) {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("a window margin sits inside the numerical band");
    } else if (min_margin > 0.0) {
        r.verdict = Verdict::persistent;
        r.notes.push_back("all sampled windows satisfy the inequality (persistence evidence)");
    } else {
        r.verdict = Verdict::inconclusive;
        r.notes.push_back("window inequality fails for the supplied (eta, T); min margin at t1=" +
                          std::to_string(min_win.t1) + ", t2=" + std::to_string(min_win.t2));
    }
    return r;
}

} // namespace

CriterionReport check_window(const ChemostatModel& model,
                             const WashoutSolution& z, const PhiFunction& phi,
                             double eta, double T, double horizon,
                             double stride) {
    if (!(eta > 0.0)) throw std::invalid_argument("check_window: eta must be positive");
    const double tau = model.tau;
    auto lhs = [&](double t) {
        double u = t - tau;
        if (u < 0.0 && phi.regime != PhiRegime::periodic) u = 0.0;
        return model.p.eval(std::max(z.z_at(u), 0.0)) * phi.at(u);
    };
    auto rhs = [&](double t) { return model.D.eval(t); };
    CriterionReport r = window_scan(lhs, rhs, eta, T, horizon, stride, "window-criterion");
    return r;
}

CriterionReport search_eta_T(const ChemostatModel& model,
                             const WashoutSolution& z, const PhiFunction& phi,
                             double horizon, double stride) {
    const double tau = model.tau;
    if (!(stride > 0.0)) throw std::invalid_argument("search_eta_T: stride must be positive");
    auto lhs_fn = [&](double t) {
        double u = t - tau;
        if (u < 0.0 && phi.regime != PhiRegime::periodic) u = 0.0;
        return model.p.eval(std::max(z.z_at(u), 0.0)) * phi.at(u);
    };
    auto rhs_fn = [&](double t) { return model.D.eval(t); };

    const auto n = static_cast<std::size_t>(std::floor(horizon / stride + 1e-9));
    std::vector<double> L(n + 1, 0.0), R(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double a = stride * static_cast<double>(i);
        L[i + 1] = L[i] + simpson_fixed(lhs_fn, a, a + stride, 16);
        R[i + 1] = R[i] + simpson_fixed(rhs_fn, a, a + stride, 16);
    }

    const double maxD = model.D.max_value();
    CriterionReport best;
    best.criterion = "eta-T-search";
    best.verdict = Verdict::inconclusive;
    bool found = false;

    for (double T = std::max({stride, tau, 1.0}); 2.0 * T + stride < horizon; T *= 2.0) {
        // largest eta admissible at this T: min over windows of gap / length
        double eta_max = 0.0;
        bool any = false;
        for (std::size_t i = 0; i <= n; ++i) {
            double t1 = stride * static_cast<double>(i);
            if (!(t1 > T)) continue;
            for (std::size_t j = i + 1; j <= n; ++j) {
                double t2 = stride * static_cast<double>(j);
                if (!(t2 - t1 > T)) continue;
                double slope = ((L[j] - L[i]) - (R[j] - R[i])) / (t2 - t1);
                eta_max = any ? std::min(eta_max, slope) : slope;
                any = true;
            }
        }
        if (!any || !(eta_max > 0.0)) continue;
        double eta = 0.0;
        for (int k = 0; k <= 20; ++k) {
            double cand = std::ldexp(std::max(maxD, 1e-30), -k);
            if (cand < eta_max) { eta = cand; break; }
        }
        if (!(eta > 0.0)) continue;
        if (!found || eta > best.eta) {
            found = true;
            best.eta = eta;
            best.T = T;
            best.margin = eta_max;
        }
    }
    if (found) {
        best.verdict = Verdict::persistent;
        best.notes.push_back("witness (eta, T) found; all sampled windows pass");
    } else {
        best.notes.push_back("no witness (eta, T) found on this horizon");
    }
    return best;
}

CriterionReport check_necessary_exp(const ChemostatModel& model,
                                    const WashoutSolution& z, double eta,
                                    double T, double horizon, double stride) {
    if (!(eta > 0.0)) throw std::invalid_argument("check_necessary_exp: eta must be positive");
    const double tau = model.tau;
    auto lhs = [&](double t) {
        return model.p.eval(std::max(z.z_at(t), 0.0)) *
               std::exp(-(z.I_at(t) - z.I_at(t - tau)));
    };
    auto rhs = [&](double t) { return model.D.eval(t); };
    CriterionReport r = window_scan(lhs, rhs, eta, T, horizon, stride, "necessary-exp");
    // Passing this scan never certifies persistence; it is the necessary
    // direction of the criterion only.
    if (r.verdict == Verdict::persistent) r.verdict = Verdict::inconclusive;
    r.notes.insert(r.notes.begin(), "necessary only: passing does not imply persistence");
    if (!model.s0.is_constant())
        r.notes.push_back("warning: s0 is not constant; this scan is only justified for constant nutrient input");
    return r;
}

ClassifyResult classify_trajectory(const Trajectory& traj, double tail_fraction,
                                   double threshold) {
    if (!(tail_fraction > 0.0) || !(tail_fraction < 1.0))
        throw std::invalid_argument("classify_trajectory: tail_fraction must be in (0,1)");
    if (!(threshold > 0.0))
        throw std::invalid_argument("classify_trajectory: threshold must be positive");
    const std::size_t z0 = traj.zero_index();
    const std::size_t n = traj.t.size();
    bool any_x = false;
    for (std::size_t k = 0; k < n; ++k)
        if (traj.x[k] > 0.0) { any_x = true; break; }
    if (!any_x)
        throw std::invalid_argument("classify_trajectory: null initial condition (x identically 0)");

    ClassifyResult r;
    r.x_end = traj.x.back();

    const std::size_t n_run = n - z0;
    auto tail_len = static_cast<std::size_t>(std::floor(tail_fraction * static_cast<double>(n_run)));
    tail_len = std::min(std::max<std::size_t>(tail_len, 9), n);
    const std::size_t k0 = n - tail_len;

    double delta_hat = traj.x[k0];
    for (std::size_t k = k0; k < n; ++k) delta_hat = std::min(delta_hat, traj.x[k]);
    r.delta_hat = delta_hat;
    if (traj.I.back() < 30.0) {
        r.notes.push_back("horizon too short: I(t_end) < 30, transients may dominate");
        return r;
    }

    // sub-window statistics over the tail
    auto window_min = [&](std::size_t parts, std::size_t idx) {
        std::size_t a = k0 + idx * tail_len / parts;
        std::size_t b = k0 + (idx + 1) * tail_len / parts;
        double m = traj.x[a];
        for (std::size_t k = a; k < std::min(b + 1, n); ++k) m = std::min(m, traj.x[k]);
        return m;
    };
    auto window_max = [&](std::size_t parts, std::size_t idx) {
        std::size_t a = k0 + idx * tail_len / parts;
        std::size_t b = k0 + (idx + 1) * tail_len / parts;
        double m = traj.x[a];
        for (std::size_t k = a; k < std::min(b + 1, n); ++k) m = std::max(m, traj.x[k]);
        return m;
    };

    double m1 = window_min(3, 0), m2 = window_min(3, 1), m3 = window_min(3, 2);
    bool steady = m2 >= 0.9 * m1 && m3 >= 0.9 * m2;
    if (delta_hat > threshold && steady) {
        r.verdict = Verdict::persistent;
        return r;
    }

    if (r.x_end < threshold * 1e-3) {
        bool decaying = true;
        double prev = window_max(8, 0);
        for (std::size_t i = 1; i < 8; ++i) {
            double cur = window_max(8, i);
            if (cur > prev * (1.0 + 1e-9)) { decaying = false; break; }
            prev = cur;
        }
        if (decaying) {
            r.verdict = Verdict::not_persistent;
            return r;
        }
        r.notes.push_back("x is small at t_end but the tail envelope is not monotone");
    }
    r.verdict = Verdict::inconclusive;
    return r;
}

} // namespace chemostat
