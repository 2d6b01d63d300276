#pragma once

// Minimum total transmit power over a time-shared frame.
//
// Every schedulable link k (an uplink/downlink pair in full duplex, a single
// user in half duplex) gets a time fraction gamma_k and a time-averaged rate
// r_hat_k = gamma_k * R_k. Its power cost is the perspective
// gamma_k * P_k(r_hat_k / gamma_k) of its convex minimum-power curve, which is
// jointly convex in (gamma, r_hat). The frame constraints are
//
//   sum gamma <= 1,  sum r_hat = r_tot,
//   sum_j gamma_ij >= gamma_min_up  (each uplink user i),
//   sum_i gamma_ij >= gamma_min_down (each downlink user j).
//
// The rate constraint is dualized with multiplier mu. For a fixed mu every
// link runs at the rate where its marginal power equals mu, and its value per
// unit time is the conjugate P_k*(mu); what remains is a linear program over
// the time-share polytope. The concave dual in mu is maximized by bisection on
// its supergradient r_tot - sum gamma_k R_k(mu), and the primal is recovered by
// mixing the two time-share vertices that bracket mu*. Multipliers of the
// polytope constraints come from the LP, and the reported duality gap is
// measured against the fully decomposed Lagrangian.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdee/channel_model.hpp"
#include "fdee/errors.hpp"
#include "fdee/single_pair.hpp"

namespace fdee {

/// Full duplex: gamma and r_hat are M x N. Half duplex: (M + N) x 1, uplink
/// users first.
struct Allocation {
    Eigen::MatrixXd gamma;
    Eigen::MatrixXd r_hat;
};

struct DualVars {
    double lambda_time{0};   ///< sum gamma <= 1
    double mu_rate{0};       ///< sum r_hat = r_tot (free sign)
    Eigen::VectorXd nu_up;   ///< uplink fairness floors
    Eigen::VectorXd xi_down; ///< downlink fairness floors
};

struct SolverConfig {
    int max_iters{200};       ///< cap on dual (mu) iterations
    double tol_gap{1e-5};     ///< relative duality gap
    double tol_feas{1e-6};    ///< absolute constraint residual
    double gamma_floor{1e-9}; ///< smaller time shares are dropped to zero
};

struct SolveResult {
    double p_tot_min{0};
    Allocation allocation;
    DualVars duals;
    double dual_bound{0};
    double duality_gap{0};     ///< (primal - dual) / primal
    double max_residual{0};
    int iterations{0};
};

class ConvergenceError : public SolverError {
public:
    ConvergenceError(const std::string& what, SolveResult best)
        : SolverError(what), best_(std::move(best))
    {
    }

    const SolveResult& best_iterate() const { return best_; }

private:
    SolveResult best_;
};

/// Convex, increasing minimum-power curve P(R) of one schedulable link.
class LinkCurve {
public:
    static LinkCurve full_duplex(const Gains& gains);
    static LinkCurve single_link(double cnr);

    double power(double rate) const;
    double marginal(double rate) const;
    /// Rate where marginal() equals mu; zero when mu <= marginal(0).
    double rate_at_marginal(double mu) const;
    /// max_R (mu R - P(R)) >= 0
    double conjugate(double mu) const;

private:
    bool paired_{false};
    Gains gains_;
    double cnr_{1};
};

struct PairSolution {
    double gamma{0};
    double r_hat{0};
    double value{0};  ///< minimized Lagrangian term
};

Gains pair_gains(const Scenario& scenario, Eigen::Index i, Eigen::Index j);

/// gamma * P_min(r_hat / gamma), closed at gamma = 0 with value 0 for r_hat = 0.
double perspective_cost(double gamma, double r_hat, const Gains& gains);

/// Minimizes perspective_cost + (lambda - nu_i - xi_j) gamma - mu r_hat over
/// gamma in [0, 1], r_hat >= 0. Ties in gamma resolve to 0.
PairSolution pair_subproblem(const DualVars& duals, Eigen::Index i, Eigen::Index j, const Gains& gains);

/// Same for an arbitrary link with time coefficient `time_price`.
PairSolution link_subproblem(const LinkCurve& curve, double time_price, double mu);

SolveResult solve_min_total_power(double r_tot, const Scenario& scenario, const SolverConfig& config = {});

/// Half-duplex reference: each of the M + N users is its own link, with the
/// same frame and fairness constraints.
SolveResult hd_baseline_min_power(double r_tot, const Scenario& scenario, const SolverConfig& config = {});

/// Bits per joule: W r_tot / (omega P + P_fix).
double energy_efficiency(double r_tot, double p_tot_w, const Scenario& scenario);

double ee_at(double r_tot, const Scenario& scenario, const SolverConfig& config = {});

/// Largest violation of the frame, rate and fairness constraints for a
/// full-duplex allocation.
double constraint_residual(const Allocation& allocation, double r_tot, const Scenario& scenario);

} // namespace fdee
