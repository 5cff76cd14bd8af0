#include "chemostat/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chemostat {

UptakeFunction UptakeFunction::monod(double m, double a) {
    if (!(m > 0.0) || !(a > 0.0))
        throw std::invalid_argument("UptakeFunction: monod requires m > 0 and a > 0");
    UptakeFunction p;
    p.kind_ = Kind::monod;
    p.m_ = m;
    p.a_ = a;
    return p;
}

UptakeFunction UptakeFunction::table(std::vector<double> s_knots,
                                     std::vector<double> p_values) {
    if (s_knots.size() != p_values.size() || s_knots.size() < 2)
        throw std::invalid_argument("UptakeFunction: table needs matching knots/values, at least 2");
    if (s_knots.front() != 0.0 || p_values.front() != 0.0)
        throw std::invalid_argument("UptakeFunction: table must start at p(0)=0");
    for (size_t i = 1; i < s_knots.size(); ++i) {
        if (!(s_knots[i] > s_knots[i - 1]))
            throw std::invalid_argument("UptakeFunction: s knots must be strictly increasing");
        if (!(p_values[i] > p_values[i - 1]))
            throw std::invalid_argument("UptakeFunction: table must be strictly increasing (p' > 0)");
    }
    UptakeFunction p;
    p.kind_ = Kind::table;
    p.s_knots_ = std::move(s_knots);
    p.p_values_ = std::move(p_values);
    return p;
}

double UptakeFunction::eval(double s) const {
    if (s < 0.0) throw std::domain_error("UptakeFunction: concentration must be non-negative");
    if (kind_ == Kind::monod) return m_ * s / (a_ + s);
    if (s >= s_knots_.back()) {
        // extend with the last segment's slope to stay strictly increasing
        size_t n = s_knots_.size();
        double slope = (p_values_[n - 1] - p_values_[n - 2]) / (s_knots_[n - 1] - s_knots_[n - 2]);
        return p_values_.back() + slope * (s - s_knots_.back());
    }
    auto it = std::upper_bound(s_knots_.begin(), s_knots_.end(), s);
    size_t i = static_cast<size_t>(it - s_knots_.begin());
    i = (i == 0) ? 0 : i - 1;
    if (i + 1 >= s_knots_.size()) i = s_knots_.size() - 2;
    double theta = (s - s_knots_[i]) / (s_knots_[i + 1] - s_knots_[i]);
    return p_values_[i] + theta * (p_values_[i + 1] - p_values_[i]);
}

double UptakeFunction::derivative(double s) const {
    if (s < 0.0) throw std::domain_error("UptakeFunction: concentration must be non-negative");
    if (kind_ == Kind::monod) {
        double d = a_ + s;
        return m_ * a_ / (d * d);
    }
    size_t i = 0;
    if (s >= s_knots_.back()) {
        i = s_knots_.size() - 2;
    } else {
        auto it = std::upper_bound(s_knots_.begin(), s_knots_.end(), s);
        i = static_cast<size_t>(it - s_knots_.begin());
        i = (i == 0) ? 0 : i - 1;
        if (i + 1 >= s_knots_.size()) i = s_knots_.size() - 2;
    }
    return (p_values_[i + 1] - p_values_[i]) / (s_knots_[i + 1] - s_knots_[i]);
}

ChemostatModel::ChemostatModel(UptakeFunction p_, TimeFunction s0_,
                               TimeFunction D_, double tau_)
    : p(std::move(p_)), s0(std::move(s0_)), D(std::move(D_)), tau(tau_) {
    if (!(tau >= 0.0)) throw std::invalid_argument("ChemostatModel: tau must be non-negative");
}

namespace {

void check_history_table(double tau, const std::vector<double>& knots,
                         const std::vector<double>& values, const char* name) {
    if (knots.size() != values.size() || knots.size() < 2)
        throw std::invalid_argument(std::string("History: ") + name + " needs matching knots/values, at least 2");
    const double eps = 1e-9 * std::max(1.0, tau);
    if (std::abs(knots.front() + tau) > eps || std::abs(knots.back()) > eps)
        throw std::invalid_argument(std::string("History: ") + name + " domain must be exactly [-tau, 0]");
    for (size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument(std::string("History: ") + name + " knots must be strictly increasing");
    for (double v : values)
        if (!(v >= 0.0))
            throw std::invalid_argument(std::string("History: ") + name + " values must be non-negative");
}

double interp_table(const std::vector<double>& knots, const std::vector<double>& values,
                    double t) {
    if (t <= knots.front()) return values.front();
    if (t >= knots.back()) return values.back();
    auto it = std::upper_bound(knots.begin(), knots.end(), t);
    size_t i = static_cast<size_t>(it - knots.begin()) - 1;
    double theta = (t - knots[i]) / (knots[i + 1] - knots[i]);
    return values[i] + theta * (values[i + 1] - values[i]);
}

} // namespace

History::History(double tau, std::vector<double> s_knots, std::vector<double> s_values,
                 std::vector<double> x_knots, std::vector<double> x_values)
    : tau_(tau), s_knots_(std::move(s_knots)), s_values_(std::move(s_values)),
      x_knots_(std::move(x_knots)), x_values_(std::move(x_values)) {
    if (!(tau_ >= 0.0)) throw std::invalid_argument("History: tau must be non-negative");
    if (tau_ == 0.0) {
        // degenerate domain {0}: accept single-point style tables too
        if (s_knots_.size() < 1 || s_knots_.size() != s_values_.size() ||
            x_knots_.size() < 1 || x_knots_.size() != x_values_.size())
            throw std::invalid_argument("History: bad tables for tau = 0");
        for (double v : s_values_)
            if (!(v >= 0.0)) throw std::invalid_argument("History: values must be non-negative");
        for (double v : x_values_)
            if (!(v >= 0.0)) throw std::invalid_argument("History: values must be non-negative");
        return;
    }
    check_history_table(tau_, s_knots_, s_values_, "s_init");
    check_history_table(tau_, x_knots_, x_values_, "x_init");
}

History History::constants(double tau, double s_value, double x_value) {
    if (tau == 0.0)
        return History(0.0, {0.0}, {s_value}, {0.0}, {x_value});
    return History(tau, {-tau, 0.0}, {s_value, s_value}, {-tau, 0.0},
                   {x_value, x_value});
}

double History::s_at(double t) const { return interp_table(s_knots_, s_values_, t); }
double History::x_at(double t) const { return interp_table(x_knots_, x_values_, t); }

bool is_non_null(const History& h) {
    if (h.x_at(0.0) > 0.0) return true;
    // scan the merged knot grid plus midpoints; exact for piecewise-linear data
    std::vector<double> grid = h.s_knots();
    grid.insert(grid.end(), h.x_knots().begin(), h.x_knots().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<double> pts = grid;
    for (size_t i = 0; i + 1 < grid.size(); ++i)
        pts.push_back(0.5 * (grid[i] + grid[i + 1]));
    for (double t : pts)
        if (h.s_at(t) > 0.0 && h.x_at(t) > 0.0) return true;
    return false;
}

} // namespace chemostat
