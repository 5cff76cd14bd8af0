#ifndef CHEMOSTAT_TIMEFN_HPP
#define CHEMOSTAT_TIMEFN_HPP

#include <vector>

namespace chemostat {

/// Non-negative scalar signal of time. Three kinds:
///   constant  - a single value for all t
///   periodic  - uniform samples over one period [0, omega), linearly
///               interpolated and wrapped by exact floor-mod reduction
///   tabulated - strictly increasing knots, linear interpolation in between
/// Immutable after construction; safe to share across threads.
class TimeFunction {
public:
    enum class Kind { constant, periodic, tabulated };
    enum class Extrapolation { none, hold };

    static TimeFunction constant(double value);
    /// samples[i] is the value at t = i * omega / samples.size(); the grid
    /// covers exactly [0, omega) and wraps back to samples[0].
    static TimeFunction periodic(double omega, std::vector<double> samples);
    static TimeFunction tabulated(std::vector<double> knots,
                                  std::vector<double> values,
                                  Extrapolation extrap = Extrapolation::none);

    Kind kind() const { return kind_; }
    bool is_constant() const { return kind_ == Kind::constant; }
    bool is_periodic() const { return kind_ == Kind::periodic; }
    double constant_value() const;
    double period() const { return omega_; }

    double eval(double t) const;
    double operator()(double t) const { return eval(t); }

    /// Composite-Simpson integral of the signal over [a,b], refined until the
    /// estimated error is below tol. Sub-intervals are split at interpolation
    /// knots so piecewise-linear kinds converge immediately.
    double integrate(double a, double b, double tol = 1e-8) const;

    /// (1/omega) * integrate(0, omega).
    double average(double omega, double tol = 1e-8) const;

    /// Largest sampled value (exact for all three kinds).
    double max_value() const;
    double min_value() const;

    /// Pointwise multiple of the signal; factor must be non-negative.
    TimeFunction scaled(double factor) const;

private:
    TimeFunction() = default;

    Kind kind_ = Kind::constant;
    double value_ = 0.0;                // constant kind
    double omega_ = 0.0;                // periodic kind
    std::vector<double> knots_;         // tabulated kind (periodic: implicit uniform)
    std::vector<double> values_;        // periodic + tabulated kinds
    Extrapolation extrap_ = Extrapolation::none;
};

} // namespace chemostat

#endif
