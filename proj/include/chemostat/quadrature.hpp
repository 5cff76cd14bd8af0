#ifndef CHEMOSTAT_QUADRATURE_HPP
#define CHEMOSTAT_QUADRATURE_HPP

#include <functional>

namespace chemostat {

/// Composite Simpson on [a,b] with n intervals (n even).
double simpson_fixed(const std::function<double(double)>& f, double a, double b,
                     int n);

/// Composite Simpson with interval halving until two successive estimates
/// differ by at most tol. Starts at 8 intervals.
double simpson_adaptive(const std::function<double(double)>& f, double a,
                        double b, double tol);

} // namespace chemostat

#endif
