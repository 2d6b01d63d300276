#pragma once

#include <Eigen/Dense>

namespace fdee::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status{Status::Infeasible};
    Eigen::VectorXd x;      ///< primal solution
    Eigen::VectorXd duals;  ///< one multiplier per row, >= 0 at optimum
    double objective{0};
    int pivots{0};
};

/// maximize c.x  subject to  A x <= b, x >= 0.
///
/// Dense two-phase tableau simplex with Bland's rule. Intended for the small
/// time-sharing programs of this library (tens of rows, at most a few hundred
/// columns), not as a general LP code.
Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

} // namespace fdee::lp
