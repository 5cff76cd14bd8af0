#include "chemostat/dde.hpp"

#include <algorithm>
#include <cmath>

#include "chemostat/washout.hpp"

namespace chemostat {

namespace {

double hermite(double v0, double v1, double d0, double d1, double h, double theta) {
    double t2 = theta * theta, t3 = t2 * theta;
    return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + theta) * h * d0 +
           (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * h * d1;
}

struct State {
    double s, x, I;
};

} // namespace

double Trajectory::interp(const std::vector<double>& v,
                          const std::vector<double>& dv, double time) const {
    const double t0 = t.front();
    double u = (time - t0) / h;
    const double slack = 1e-9;
    if (u < -slack || u > static_cast<double>(v.size() - 1) + slack)
        throw std::domain_error("Trajectory: query outside range");
    auto i = static_cast<std::size_t>(std::max(0.0, std::floor(u)));
    if (i + 1 >= v.size()) i = v.size() - 2;
    double theta = std::clamp(u - static_cast<double>(i), 0.0, 1.0);
    return hermite(v[i], v[i + 1], dv[i], dv[i + 1], h, theta);
}

double Trajectory::s_at(double time) const { return interp(s, ds, time); }
double Trajectory::x_at(double time) const { return interp(x, dx, time); }
double Trajectory::I_at(double time) const { return interp(I, dI, time); }

Trajectory integrate(const ChemostatModel& model, const History& h0,
                     double t_end, double h) {
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate: t_end must be positive");
    if (!(h > 0.0)) throw std::invalid_argument("integrate: step must be positive");
    const double tau = model.tau;
    std::size_t nh = 0;
    if (tau > 0.0) {
        double ratio = tau / h;
        nh = static_cast<std::size_t>(std::llround(ratio));
        if (nh == 0 || std::abs(ratio - static_cast<double>(nh)) > 1e-9 * ratio)
            throw std::invalid_argument("integrate: step h must divide tau exactly");
    }
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
    const std::size_t n_nodes = nh + n_steps + 1;

    Trajectory traj;
    traj.h = h;
    traj.tau = tau;
    traj.n_hist = nh;
    traj.t.resize(n_nodes);
    traj.s.resize(n_nodes);
    traj.x.resize(n_nodes);
    traj.I.resize(n_nodes);
    traj.ds.resize(n_nodes);
    traj.dx.resize(n_nodes);
    traj.dI.resize(n_nodes);

    const double D0 = model.D.eval(0.0);

    // history nodes, t in [-tau, 0]
    for (std::size_t k = 0; k <= nh; ++k) {
        double t = -tau + static_cast<double>(k) * h;
        if (k == nh) t = 0.0;
        traj.t[k] = t;
        traj.s[k] = h0.s_at(t);
        traj.x[k] = h0.x_at(t);
        traj.I[k] = t * D0; // backward-constant convention for t < 0
        traj.dI[k] = D0;
    }
    // secant slopes inside the (piecewise-linear) history
    for (std::size_t k = 0; k < nh; ++k) {
        traj.ds[k] = (h0.s_at(traj.t[k] + 0.5 * h) - h0.s_at(traj.t[k])) / (0.5 * h);
        traj.dx[k] = (h0.x_at(traj.t[k] + 0.5 * h) - h0.x_at(traj.t[k])) / (0.5 * h);
    }

    double state_scale = 1.0;
    for (std::size_t k = 0; k <= nh; ++k)
        state_scale = std::max({state_scale, traj.s[k], traj.x[k]});

    // delayed lookup at time td = stage_time - tau (history uses exact
    // piecewise-linear interpolation; computed region uses cubic Hermite)
    auto delayed = [&](double td) -> State {
        if (td <= 0.0) return {h0.s_at(td), h0.x_at(td), td * D0};
        double u = (td + tau) / h;
        auto i = static_cast<std::size_t>(std::floor(u + 1e-9));
        double theta = u - static_cast<double>(i);
        if (std::abs(theta) < 1e-9)
            return {traj.s[i], traj.x[i], traj.I[i]};
        return {hermite(traj.s[i], traj.s[i + 1], traj.ds[i], traj.ds[i + 1], h, theta),
                hermite(traj.x[i], traj.x[i + 1], traj.dx[i], traj.dx[i + 1], h, theta),
                hermite(traj.I[i], traj.I[i + 1], traj.dI[i], traj.dI[i + 1], h, theta)};
    };

    auto rhs = [&](double ts, const State& y) -> State {
        double Dt = model.D.eval(ts);
        double ps = model.p.eval(std::max(y.s, 0.0));
        double growth;
        if (tau > 0.0) {
            State d = delayed(ts - tau);
            growth = std::max(d.x, 0.0) * model.p.eval(std::max(d.s, 0.0)) *
                     std::exp(-(y.I - d.I));
        } else {
            growth = std::max(y.x, 0.0) * ps;
        }
        return {(model.s0.eval(ts) - y.s) * Dt - std::max(y.x, 0.0) * ps,
                -Dt * y.x + growth, Dt};
    };

    // slopes at t = 0 switch from history secants to the RHS
    {
        State y0{traj.s[nh], traj.x[nh], traj.I[nh]};
        State f0 = rhs(0.0, y0);
        traj.ds[nh] = f0.s;
        traj.dx[nh] = f0.x;
        traj.dI[nh] = f0.I;
    }

    for (std::size_t k = nh; k + 1 < n_nodes; ++k) {
        const double t = traj.t[k];
        const State y{traj.s[k], traj.x[k], traj.I[k]};
        State k1 = rhs(t, y);
        State k2 = rhs(t + 0.5 * h, {y.s + 0.5 * h * k1.s, y.x + 0.5 * h * k1.x, y.I + 0.5 * h * k1.I});
        State k3 = rhs(t + 0.5 * h, {y.s + 0.5 * h * k2.s, y.x + 0.5 * h * k2.x, y.I + 0.5 * h * k2.I});
        State k4 = rhs(t + h, {y.s + h * k3.s, y.x + h * k3.x, y.I + h * k3.I});

        double sn = y.s + h / 6.0 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s);
        double xn = y.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
        double In = y.I + h / 6.0 * (k1.I + 2 * k2.I + 2 * k3.I + k4.I);
        double tn = t + h;

        if (!std::isfinite(sn) || !std::isfinite(xn) || !std::isfinite(In))
            throw IntegrationError("integrate: non-finite state", tn);
        const double clamp_floor = -1e-12 * state_scale;
        if (sn < 0.0) {
            if (sn < clamp_floor)
                throw IntegrationError("integrate: s went negative beyond clamp band", tn);
            sn = 0.0;
        }
        if (xn < 0.0) {
            if (xn < clamp_floor)
                throw IntegrationError("integrate: x went negative beyond clamp band", tn);
            xn = 0.0;
        }
        state_scale = std::max({state_scale, sn, xn});

        traj.t[k + 1] = tn;
        traj.s[k + 1] = sn;
        traj.x[k + 1] = xn;
        traj.I[k + 1] = In;
        State fn = rhs(tn, {sn, xn, In});
        traj.ds[k + 1] = fn.s;
        traj.dx[k + 1] = fn.x;
        traj.dI[k + 1] = fn.I;
    }
    return traj;
}

SampledSeries compute_y(const Trajectory& traj, const ChemostatModel& model) {
    const std::size_t nh = traj.n_hist;
    const std::size_t n = traj.t.size() - nh;
    SampledSeries y;
    y.t0 = 0.0;
    y.h = traj.h;
    y.v.assign(n, 0.0);
    if (traj.tau == 0.0) return y; // empty integration range

    std::vector<double> integrand(traj.t.size());
    for (std::size_t j = 0; j < traj.t.size(); ++j)
        integrand[j] = traj.x[j] * model.p.eval(traj.s[j]);

    for (std::size_t k = nh; k < traj.t.size(); ++k) {
        double acc = 0.0;
        for (std::size_t j = k - nh; j < k; ++j) {
            double a = integrand[j] * std::exp(-(traj.I[k] - traj.I[j]));
            double b = integrand[j + 1] * std::exp(-(traj.I[k] - traj.I[j + 1]));
            acc += 0.5 * traj.h * (a + b);
        }
        y.v[k - nh] = acc;
    }
    return y;
}

SampledSeries conservation_defect(const Trajectory& traj,
                                  const ChemostatModel& model, double z0) {
    WashoutSolution z = washout_solution(model, z0, traj.t_end(), traj.h);
    SampledSeries y = compute_y(traj, model);
    const std::size_t nh = traj.n_hist;
    SampledSeries defect;
    defect.t0 = 0.0;
    defect.h = traj.h;
    defect.v.resize(y.v.size());
    for (std::size_t i = 0; i < defect.v.size(); ++i)
        defect.v[i] = z.z.v[i] - traj.s[nh + i] - traj.x[nh + i] - y.v[i];
    return defect;
}

PsiResult compute_psi(const Trajectory& traj, const ChemostatModel& model) {
    const std::size_t nh = traj.n_hist;
    const std::size_t total = traj.t.size();
    PsiResult out;
    out.psi.t0 = 0.0;
    out.psi.h = traj.h;
    if (traj.tau == 0.0) {
        out.psi.v.assign(total - nh, 1.0);
        out.identity_residual = 0.0;
        return out;
    }
    if (total - nh <= nh)
        throw std::invalid_argument("compute_psi: trajectory shorter than tau");
    const std::size_t n = total - nh - nh; // psi nodes: t in [0, t_end - tau]
    out.psi.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = nh + i;
        if (traj.x[k] <= 0.0 || traj.x[k + nh] <= 0.0)
            throw std::domain_error("compute_psi: psi undefined where x <= 0");
        out.psi.v[i] =
            traj.x[k] / traj.x[k + nh] * std::exp(-(traj.I[k + nh] - traj.I[k]));
    }
    // Self-consistency: psi(t) = exp(-int_{t-tau}^t p(s) psi) for t >= tau
    double res = 0.0;
    for (std::size_t i = nh; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = i - nh; j < i; ++j) {
            double a = model.p.eval(traj.s[nh + j]) * out.psi.v[j];
            double b = model.p.eval(traj.s[nh + j + 1]) * out.psi.v[j + 1];
            acc += 0.5 * traj.h * (a + b);
        }
        res = std::max(res, std::abs(out.psi.v[i] - std::exp(-acc)));
    }
    out.identity_residual = res;
    return out;
}

double log_growth_identity(const Trajectory& traj, const ChemostatModel& model) {
    const std::size_t nh = traj.n_hist;
    PsiResult pr = compute_psi(traj, model);
    // cumulative trapezoid of p(s(t-tau)) psi(t-tau) - D(t) from t = tau
    const std::size_t n_psi = pr.psi.v.size();
    std::size_t first = nh;                 // node index of t = tau (within [0,t_end] frame)
    std::size_t last = nh + n_psi - 1;      // t = t_end (tau>0) or t_end (tau=0)
    if (traj.tau == 0.0) { first = 0; last = n_psi - 1; }
    std::vector<double> cum(last - first + 1, 0.0);
    auto integrand = [&](std::size_t i) {
        // i indexes [0, t_end] frame; delayed arg s(t - tau), psi(t - tau)
        double t = traj.h * static_cast<double>(i);
        std::size_t di = i - (traj.tau > 0.0 ? nh : 0);
        return model.p.eval(traj.s[nh + di]) * pr.psi.v[di] - model.D.eval(t);
    };
    for (std::size_t i = first + 1; i <= last; ++i)
        cum[i - first] = cum[i - first - 1] +
                         0.5 * traj.h * (integrand(i - 1) + integrand(i));

    double residual = 0.0;
    const std::size_t n_pairs = 9;
    for (std::size_t a = 0; a < n_pairs; ++a) {
        std::size_t ia = first + a * (last - first) / n_pairs;
        for (std::size_t b = a + 1; b <= n_pairs; ++b) {
            std::size_t ib = first + b * (last - first) / n_pairs;
            double lhs = std::log(traj.x[nh + ib]) - std::log(traj.x[nh + ia]);
            double rhs = cum[ib - first] - cum[ia - first];
            residual = std::max(residual, std::abs(lhs - rhs));
        }
    }
    return residual;
}

} // namespace chemostat
