#pragma once

// Brute-force reference computations for the test suite and `fdee verify`.
// Slow on purpose. Nothing here calls the closed forms or the time-sharing
// solver; rates are recomputed from the link equations directly.

#include <functional>

#include <Eigen/Dense>

#include "fdee/channel_model.hpp"
#include "fdee/single_pair.hpp"

namespace fdee::oracle {

/// A reference value with an estimate of its own error.
struct Estimate {
    double value{0};
    double resolution{0};  ///< absolute
};

/// min p_up + p_down subject to the pair sum rate equal to `rate`. Searches
/// p_up (with p_down eliminated through the rate equation) by a coarse scan
/// followed by golden-section bracket shrinking down to `resolution`
/// relative width.
Estimate min_power_single(double rate, const Gains& gains, double resolution = 1e-10);

/// Exhaustive grid over (gamma, r_hat) for scenarios with at most two pairs,
/// followed by zoomed re-gridding around the incumbent. Each grid point is
/// costed with min_power_single.
Estimate min_power_multi(double r_tot, const Scenario& scenario, int grid_steps = 32, int zoom_levels = 8);

struct ConvexityReport {
    double min_second_difference{0};
    double min_midpoint_slack{0};
    Eigen::Index samples{0};
};

ConvexityReport convexity_probe(const std::function<double(double)>& f, double lo, double hi, int n_samples);

/// |central difference - analytic| / |analytic| (absolute when analytic == 0).
double finite_difference_check(const std::function<double(double)>& f, double x, double analytic, double h);

/// Second-order one-sided difference; `right` selects the side.
double one_sided_derivative(const std::function<double(double)>& f, double x, double h, bool right);

} // namespace fdee::oracle
