#pragma once

// Randomized checks of the solvers against the brute-force oracles. Each check
// draws its own instances from a seeded generator and reports the worst
// observed error against a fixed tolerance.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fdee/channel_model.hpp"
#include "fdee/single_pair.hpp"

namespace fdee::verify {

struct CheckResult {
    std::string name;
    bool passed{false};
    long instances{0};
    double worst{0};      ///< worst observed error in the check's own metric
    double tolerance{0};
    std::string detail;
};

/// CNRs log-uniform in [0.1, 1000], chi uniform in [0, 1], conditioned on the
/// full-duplex condition holding (or failing, for the second).
Gains random_valid_gains(std::mt19937_64& rng);
Gains random_invalid_gains(std::mt19937_64& rng);

/// min_power against the one-dimensional oracle, rates uniform in (0, 10].
CheckResult closed_form_vs_oracle(int instances, std::uint64_t seed);

/// Increasing and numerically convex min_power on 200-point grids over (0, 12].
CheckResult min_power_convexity(int instances, std::uint64_t seed);

/// Value and one-sided slope agree across case_boundary_rate.
CheckResult case_continuity(int instances, std::uint64_t seed);

/// With the condition violated, the best full-duplex split never beats
/// half duplex.
CheckResult half_duplex_dominance(int instances, std::uint64_t seed);

/// EE-SE curves of random single-pair and multi-pair scenarios are unimodal.
CheckResult ee_unimodality(int single_pair, int multi_pair, int points, std::uint64_t seed);

/// Time-sharing solver against the grid oracle on random two-pair scenarios,
/// plus the one-pair reduction to the closed form.
CheckResult solver_vs_oracle(int instances, std::uint64_t seed);

/// max_ee against a refined dense-grid argmax.
CheckResult max_ee_vs_grid(int scenarios, std::uint64_t seed);

/// All of the above; `scale` multiplies every instance count.
std::vector<CheckResult> run_all(std::uint64_t seed, double scale = 1.0);

std::string format_line(const CheckResult& result);

} // namespace fdee::verify
