#include "fdee/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fdee/errors.hpp"

namespace fdee::lp {

namespace {

constexpr double kPivotTol = 1e-12;

class Tableau {
public:
    Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
        : rows_(A.rows()), vars_(A.cols())
    {
        std::vector<Eigen::Index> negative;
        for (Eigen::Index i = 0; i < rows_; ++i)
            if (b(i) < 0)
                negative.push_back(i);
        artificials_ = static_cast<Eigen::Index>(negative.size());
        cols_ = vars_ + rows_ + artificials_;

        t_ = Eigen::MatrixXd::Zero(rows_, cols_ + 1);
        basis_.resize(rows_);
        Eigen::Index art = 0;
        for (Eigen::Index i = 0; i < rows_; ++i) {
            const double sign = b(i) < 0 ? -1.0 : 1.0;
            t_.row(i).head(vars_) = sign * A.row(i);
            t_(i, vars_ + i) = sign;
            t_(i, cols_) = sign * b(i);
            if (b(i) < 0) {
                const Eigen::Index col = vars_ + rows_ + art++;
                t_(i, col) = 1.0;
                basis_[i] = col;
            } else {
                basis_[i] = vars_ + i;
            }
        }
    }

    Eigen::Index artificial_begin() const { return vars_ + rows_; }
    bool has_artificials() const { return artificials_ > 0; }

    /// Runs primal simplex for `cost` over columns [0, allowed). Returns
    /// false when unbounded.
    bool optimize(const Eigen::VectorXd& cost, Eigen::Index allowed, int& pivots)
    {
        const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
        const double tol = 1e-13 * scale;
        for (int guard = 0; guard < 100000; ++guard) {
            Eigen::Index enter = -1;
            for (Eigen::Index j = 0; j < allowed; ++j) {
                if (is_basic(j))
                    continue;
                if (reduced_cost(cost, j) > tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0)
                return true;

            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < rows_; ++i) {
                const double a = t_(i, enter);
                if (a <= kPivotTol)
                    continue;
                const double ratio = t_(i, cols_) / a;
                const double eps = 1e-14 * std::max(1.0, std::abs(best));
                if (leave < 0 || ratio < best - eps) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + eps && basis_[i] < basis_[leave]) {
                    leave = i;
                }
            }
            if (leave < 0)
                return false;
            pivot(leave, enter);
            ++pivots;
        }
        throw SolverError("simplex: pivot limit exceeded");
    }

    double objective(const Eigen::VectorXd& cost) const
    {
        double z = 0;
        for (Eigen::Index i = 0; i < rows_; ++i)
            z += cost(basis_[i]) * t_(i, cols_);
        return z;
    }

    /// Pivots artificial variables out of the basis after phase one.
    void expel_artificials(int& pivots)
    {
        for (Eigen::Index i = 0; i < rows_; ++i) {
            if (basis_[i] < artificial_begin())
                continue;
            Eigen::Index best = -1;
            double mag = kPivotTol;
            for (Eigen::Index j = 0; j < artificial_begin(); ++j) {
                if (!is_basic(j) && std::abs(t_(i, j)) > mag) {
                    mag = std::abs(t_(i, j));
                    best = j;
                }
            }
            if (best < 0)
                throw SolverError("simplex: cannot expel artificial variable");
            pivot(i, best);
            ++pivots;
        }
    }

    Eigen::VectorXd primal() const
    {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(vars_);
        for (Eigen::Index i = 0; i < rows_; ++i)
            if (basis_[i] < vars_)
                x(basis_[i]) = std::max(0.0, t_(i, cols_));
        return x;
    }

    const std::vector<Eigen::Index>& basis() const { return basis_; }

private:
    bool is_basic(Eigen::Index j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

    double reduced_cost(const Eigen::VectorXd& cost, Eigen::Index j) const
    {
        double r = cost(j);
        for (Eigen::Index i = 0; i < rows_; ++i)
            r -= cost(basis_[i]) * t_(i, j);
        return r;
    }

    void pivot(Eigen::Index row, Eigen::Index col)
    {
        t_.row(row) /= t_(row, col);
        for (Eigen::Index i = 0; i < rows_; ++i) {
            if (i == row)
                continue;
            const double f = t_(i, col);
            if (f != 0.0)
                t_.row(i) -= f * t_.row(row);
        }
        basis_[row] = col;
    }

    Eigen::Index rows_;
    Eigen::Index vars_;
    Eigen::Index artificials_{0};
    Eigen::Index cols_{0};
    Eigen::MatrixXd t_;
    std::vector<Eigen::Index> basis_;
};

} // namespace

Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
{
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (c.size() != n || b.size() != m)
        throw DomainError("lp::maximize: dimension mismatch");

    Tableau tab(A, b);
    Result result;
    const Eigen::Index total = n + m + (b.array() < 0).count();

    if (tab.has_artificials()) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
        phase1.tail(total - tab.artificial_begin()).setConstant(-1.0);
        tab.optimize(phase1, total, result.pivots);
        if (tab.objective(phase1) < -1e-10) {
            result.status = Status::Infeasible;
            return result;
        }
        tab.expel_artificials(result.pivots);
    }

    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
    cost.head(n) = c;
    if (!tab.optimize(cost, tab.artificial_begin(), result.pivots)) {
        result.status = Status::Unbounded;
        return result;
    }

    result.status = Status::Optimal;
    result.x = tab.primal();
    result.objective = c.dot(result.x);

    // y solves B^T y = c_B over the columns of [A I]
    Eigen::MatrixXd basis_cols(m, m);
    Eigen::VectorXd basis_cost(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index j = tab.basis()[i];
        if (j < n) {
            basis_cols.col(i) = A.col(j);
            basis_cost(i) = c(j);
        } else {
            basis_cols.col(i) = Eigen::VectorXd::Unit(m, j - n);
            basis_cost(i) = 0.0;
        }
    }
    result.duals = basis_cols.transpose().partialPivLu().solve(basis_cost).cwiseMax(0.0);
    return result;
}

} // namespace fdee::lp
