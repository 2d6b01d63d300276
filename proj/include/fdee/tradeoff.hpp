#pragma once

#include <optional>

#include <Eigen/Dense>

#include "fdee/multi_user.hpp"

namespace fdee {

enum class Duplex { Full, Half };

inline const char* to_string(Duplex mode) { return mode == Duplex::Full ? "FD" : "HD"; }

/// Sampled EE-SE relation of one scenario.
struct TradeoffCurve {
    Eigen::VectorXd se;     ///< bit/s/Hz, strictly increasing
    Eigen::VectorXd p_min;  ///< W
    Eigen::VectorXd ee;     ///< bit/J
};

struct EeOptimum {
    double se{0};
    double ee{0};
    double p_min{0};
    Allocation allocation;
    int evaluations{0};
};

struct UnimodalityReport {
    bool unimodal{true};
    std::optional<Eigen::Index> first_violation;
};

/// Minimum power at one SE for either duplex mode.
SolveResult solve_at(double se, const Scenario& scenario, Duplex mode, const SolverConfig& config = {});

TradeoffCurve trace_curve(const Scenario& scenario, const Eigen::VectorXd& se_grid, const SolverConfig& config = {},
                          Duplex mode = Duplex::Full);

/// Golden-section search for the SE maximizing EE on [se_lo, se_hi]. Exact for
/// quasi-concave EE(SE); returns the nearer endpoint when the peak lies outside.
EeOptimum max_ee(const Scenario& scenario, double se_lo, double se_hi, double tol_se = 1e-4,
                 const SolverConfig& config = {}, Duplex mode = Duplex::Full);

/// True iff `values` has no interior point lying more than `tol` below some
/// earlier and some later point. Plateaus pass.
UnimodalityReport unimodality_report(const Eigen::VectorXd& values, double tol);

inline UnimodalityReport unimodality_report(const TradeoffCurve& curve, double tol)
{
    return unimodality_report(curve.ee, tol);
}

} // namespace fdee
