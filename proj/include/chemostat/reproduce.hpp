#ifndef CHEMOSTAT_REPRODUCE_HPP
#define CHEMOSTAT_REPRODUCE_HPP

#include <string>
#include <vector>

#include "chemostat/model.hpp"

namespace chemostat {

struct ReproduceItem {
    std::string name;
    bool passed = false;
    double value = 0.0;
    std::string detail;
};

struct ReproduceReport {
    std::vector<ReproduceItem> items;
    bool all_passed() const;
};

/// The built-in counterexample: D(t) = 1 - sin t (period 2pi), tau = pi/2,
/// uptake pinned so p(z) = pi along the washout solution z = 1. The window
/// criterion with eta = 1/200, T = 300pi is satisfied, yet the average
/// criterion fails and the simulated culture washes out — the window
/// criterion is necessary, not sufficient.
ChemostatModel counterexample_model();

/// Monod approximation of the same scenario for direct simulation
/// (m slightly above pi, small half-saturation).
ChemostatModel counterexample_model_monod();

/// Runs the five checks: (a) the window integral of the weighted uptake over
/// one period, (b) the fixed-point weight value, (c) the eta/T window scan,
/// (d) the periodic average margin, (e) decay of the simulated biomass.
ReproduceReport run_reproduce();

} // namespace chemostat

#endif
