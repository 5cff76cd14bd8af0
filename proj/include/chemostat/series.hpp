#ifndef CHEMOSTAT_SERIES_HPP
#define CHEMOSTAT_SERIES_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace chemostat {

/// Uniformly sampled series on [t0, t0 + h*(n-1)]. When slopes are present
/// off-node evaluation is cubic Hermite, otherwise linear.
struct SampledSeries {
    double t0 = 0.0;
    double h = 1.0;
    std::vector<double> v;
    std::vector<double> dv; // optional nodal slopes

    std::size_t size() const { return v.size(); }
    double t_end() const { return t0 + h * static_cast<double>(v.size() - 1); }
    double t_at(std::size_t i) const { return t0 + h * static_cast<double>(i); }

    double at(double t) const {
        if (v.empty()) throw std::logic_error("SampledSeries: empty");
        if (v.size() == 1) return v.front();
        const double slack = 1e-9 * h;
        if (t < t0 - slack || t > t_end() + slack)
            throw std::domain_error("SampledSeries: query outside range");
        double u = (t - t0) / h;
        auto i = static_cast<std::size_t>(std::floor(u));
        if (i + 1 >= v.size()) i = v.size() - 2;
        double theta = u - static_cast<double>(i);
        if (theta < 0.0) theta = 0.0;
        if (theta > 1.0) theta = 1.0;
        if (dv.size() == v.size()) {
            double t2 = theta * theta, t3 = t2 * theta;
            return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + theta) * h * dv[i] +
                   (-2 * t3 + 3 * t2) * v[i + 1] + (t3 - t2) * h * dv[i + 1];
        }
        return v[i] + theta * (v[i + 1] - v[i]);
    }
};

} // namespace chemostat

#endif
