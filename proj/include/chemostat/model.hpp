#ifndef CHEMOSTAT_MODEL_HPP
#define CHEMOSTAT_MODEL_HPP

#include <vector>

#include "chemostat/timefn.hpp"

namespace chemostat {

/// Nutrient uptake law p(s). Requires p(0)=0 and p strictly increasing.
/// Monod is the shipped default; arbitrary monotone laws come in as tables.
class UptakeFunction {
public:
    enum class Kind { monod, table };

    static UptakeFunction monod(double m, double a);
    static UptakeFunction table(std::vector<double> s_knots,
                                std::vector<double> p_values);

    Kind kind() const { return kind_; }
    double eval(double s) const;
    double derivative(double s) const;
    double operator()(double s) const { return eval(s); }

    double monod_m() const { return m_; }
    double monod_a() const { return a_; }

private:
    UptakeFunction() = default;

    Kind kind_ = Kind::monod;
    double m_ = 0.0, a_ = 0.0;
    std::vector<double> s_knots_, p_values_;
};

/// Structural data of the chemostat: uptake law, nutrient input, washout
/// rate, and the consumption-to-growth delay.
struct ChemostatModel {
    UptakeFunction p;
    TimeFunction s0; // input nutrient concentration
    TimeFunction D;  // washout rate, 1/time
    double tau = 0.0;

    ChemostatModel(UptakeFunction p_, TimeFunction s0_, TimeFunction D_,
                   double tau_);
};

/// Initial condition pair (s, x) on [-tau, 0], tabulated with linear
/// interpolation between knots.
class History {
public:
    History(double tau, std::vector<double> s_knots, std::vector<double> s_values,
            std::vector<double> x_knots, std::vector<double> x_values);

    /// Constant histories; the common case in scenario files.
    static History constants(double tau, double s_value, double x_value);

    double tau() const { return tau_; }
    double s_at(double t) const;
    double x_at(double t) const;

    const std::vector<double>& s_knots() const { return s_knots_; }
    const std::vector<double>& x_knots() const { return x_knots_; }

private:
    double tau_ = 0.0;
    std::vector<double> s_knots_, s_values_, x_knots_, x_values_;
};

/// True iff the history can seed growth: x(0) > 0, or s and x are both
/// positive somewhere on [-tau, 0]. Decided exactly for piecewise-linear
/// data by scanning knots and midpoints.
bool is_non_null(const History& h);

} // namespace chemostat

#endif
