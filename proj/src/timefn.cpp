#include "chemostat/timefn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chemostat/quadrature.hpp"

namespace chemostat {

TimeFunction TimeFunction::constant(double value) {
    if (!(value >= 0.0)) throw std::invalid_argument("TimeFunction: constant value must be non-negative");
    TimeFunction f;
    f.kind_ = Kind::constant;
    f.value_ = value;
    return f;
}

TimeFunction TimeFunction::periodic(double omega, std::vector<double> samples) {
    if (!(omega > 0.0)) throw std::invalid_argument("TimeFunction: period must be positive");
    if (samples.size() < 2) throw std::invalid_argument("TimeFunction: periodic kind needs at least 2 samples");
    for (double v : samples)
        if (!(v >= 0.0)) throw std::invalid_argument("TimeFunction: sampled values must be non-negative");
    TimeFunction f;
    f.kind_ = Kind::periodic;
    f.omega_ = omega;
    f.values_ = std::move(samples);
    return f;
}

TimeFunction TimeFunction::tabulated(std::vector<double> knots,
                                     std::vector<double> values,
                                     Extrapolation extrap) {
    if (knots.size() != values.size() || knots.size() < 2)
        throw std::invalid_argument("TimeFunction: tabulated kind needs matching knots/values, at least 2");
    for (size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("TimeFunction: knot times must be strictly increasing");
    for (double v : values)
        if (!(v >= 0.0)) throw std::invalid_argument("TimeFunction: sampled values must be non-negative");
    TimeFunction f;
    f.kind_ = Kind::tabulated;
    f.knots_ = std::move(knots);
    f.values_ = std::move(values);
    f.extrap_ = extrap;
    return f;
}

double TimeFunction::constant_value() const {
    if (kind_ != Kind::constant) throw std::logic_error("TimeFunction: not a constant kind");
    return value_;
}

double TimeFunction::eval(double t) const {
    switch (kind_) {
    case Kind::constant:
        return value_;
    case Kind::periodic: {
        // exact floor-based reduction; well defined for negative t too
        double r = t - std::floor(t / omega_) * omega_;
        if (r >= omega_) r -= omega_; // guard against rounding at the seam
        const size_t n = values_.size();
        const double dt = omega_ / static_cast<double>(n);
        double u = r / dt;
        auto i = static_cast<size_t>(u);
        if (i >= n) i = n - 1;
        double theta = u - static_cast<double>(i);
        double v0 = values_[i];
        double v1 = values_[(i + 1) % n];
        return v0 + theta * (v1 - v0);
    }
    case Kind::tabulated: {
        if (t < knots_.front() || t > knots_.back()) {
            if (extrap_ == Extrapolation::none)
                throw std::domain_error("TimeFunction: query outside tabulated domain");
            return t < knots_.front() ? values_.front() : values_.back();
        }
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        size_t i = (it == knots_.begin()) ? 0 : static_cast<size_t>(it - knots_.begin()) - 1;
        if (i + 1 >= knots_.size()) i = knots_.size() - 2;
        double theta = (t - knots_[i]) / (knots_[i + 1] - knots_[i]);
        return values_[i] + theta * (values_[i + 1] - values_[i]);
    }
    }
    return 0.0;
}

double TimeFunction::integrate(double a, double b, double tol) const {
    if (b < a) throw std::invalid_argument("TimeFunction::integrate: b < a");
    if (tol <= 0.0) throw std::invalid_argument("TimeFunction::integrate: tol must be positive");
    if (a == b) return 0.0;
    if (kind_ == Kind::constant) return value_ * (b - a);

    // Collect interior knots so each Simpson piece sees a linear segment.
    std::vector<double> cuts;
    cuts.push_back(a);
    if (kind_ == Kind::periodic) {
        const double dt = omega_ / static_cast<double>(values_.size());
        double first = (std::floor(a / dt) + 1.0) * dt;
        for (double c = first; c < b; c += dt) cuts.push_back(c);
    } else {
        for (double k : knots_)
            if (k > a && k < b) cuts.push_back(k);
    }
    cuts.push_back(b);

    auto f = [this](double t) { return eval(t); };
    const double tol_piece = tol / static_cast<double>(cuts.size() - 1);
    double total = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        total += simpson_adaptive(f, cuts[i], cuts[i + 1], tol_piece);
    return total;
}

double TimeFunction::average(double omega, double tol) const {
    if (!(omega > 0.0)) throw std::domain_error("TimeFunction::average: period must be positive");
    return integrate(0.0, omega, tol) / omega;
}

double TimeFunction::max_value() const {
    if (kind_ == Kind::constant) return value_;
    return *std::max_element(values_.begin(), values_.end());
}

double TimeFunction::min_value() const {
    if (kind_ == Kind::constant) return value_;
    return *std::min_element(values_.begin(), values_.end());
}

TimeFunction TimeFunction::scaled(double factor) const {
    if (!(factor >= 0.0))
        throw std::invalid_argument("TimeFunction::scaled: factor must be >= 0");
    TimeFunction out = *this;
    out.value_ *= factor;
    for (double& v : out.values_) v *= factor;
    return out;
}

} // namespace chemostat
