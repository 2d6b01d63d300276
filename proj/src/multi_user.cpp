#include "fdee/multi_user.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fdee/simplex.hpp"

namespace fdee {

LinkCurve LinkCurve::full_duplex(const Gains& gains)
{
    require_fd_condition(gains);
    LinkCurve curve;
    curve.paired_ = true;
    curve.gains_ = gains;
    return curve;
}

LinkCurve LinkCurve::single_link(double cnr)
{
    if (!(cnr > 0) || !std::isfinite(cnr))
        throw DomainError("single link CNR must be positive");
    LinkCurve curve;
    curve.cnr_ = cnr;
    return curve;
}

double LinkCurve::power(double rate) const
{
    if (paired_)
        return min_power(rate, gains_).value;
    return std::expm1(rate * std::numbers::ln2) / cnr_;
}

double LinkCurve::marginal(double rate) const
{
    if (paired_)
        return marginal_power(rate, gains_);
    return std::numbers::ln2 * std::exp2(rate) / cnr_;
}

double LinkCurve::rate_at_marginal(double mu) const
{
    if (paired_)
        return fdee::rate_at_marginal(mu, gains_);
    const double a = mu * cnr_ / std::numbers::ln2;
    return a > 1.0 ? std::log2(a) : 0.0;
}

double LinkCurve::conjugate(double mu) const
{
    const double r = rate_at_marginal(mu);
    return r > 0 ? std::max(0.0, mu * r - power(r)) : 0.0;
}

Gains pair_gains(const Scenario& s, Eigen::Index i, Eigen::Index j)
{
    return {s.h_up(i), s.h_down(j), s.h_cci(i, j), s.chi};
}

double perspective_cost(double gamma, double r_hat, const Gains& gains)
{
    if (!(gamma >= 0) || gamma > 1.0 || !(r_hat >= 0))
        throw DomainError("perspective cost needs gamma in [0, 1] and r_hat >= 0");
    if (gamma == 0.0) {
        if (r_hat > 0)
            throw DomainError("positive rate on a zero time share has unbounded cost");
        return 0.0;
    }
    return gamma * min_power(r_hat / gamma, gains).value;
}

PairSolution link_subproblem(const LinkCurve& curve, double time_price, double mu)
{
    // For fixed gamma > 0 the r_hat minimization is gamma * (P(R) - mu R)
    // at the rate with P'(R) = mu, so the remaining problem is linear in gamma.
    const double value_per_time = curve.conjugate(mu);
    const double slope = time_price - value_per_time;
    if (slope < 0)
        return {1.0, curve.rate_at_marginal(mu), slope};
    return {0.0, 0.0, 0.0};
}

PairSolution pair_subproblem(const DualVars& duals, Eigen::Index i, Eigen::Index j, const Gains& gains)
{
    double price = duals.lambda_time;
    if (i < duals.nu_up.size())
        price -= duals.nu_up(i);
    if (j < duals.xi_down.size())
        price -= duals.xi_down(j);
    return link_subproblem(LinkCurve::full_duplex(gains), price, duals.mu_rate);
}

double energy_efficiency(double r_tot, double p_tot_w, const Scenario& s)
{
    if (r_tot == 0.0)
        return 0.0;
    return s.bandwidth_hz * r_tot / (s.omega * p_tot_w + s.p_fix_w);
}

namespace {

constexpr Eigen::Index kNone = -1;

/// One schedulable link and where its variables live in the output.
struct Link {
    LinkCurve curve;
    Eigen::Index up_user{kNone};
    Eigen::Index down_user{kNone};
    Eigen::Index out_row{0};
    Eigen::Index out_col{0};
};

struct TimeShareProblem {
    std::vector<Link> links;
    Eigen::Index num_up{0};
    Eigen::Index num_down{0};
    double floor_up{0};
    double floor_down{0};
    Eigen::Index out_rows{0};
    Eigen::Index out_cols{0};

    // LP rows: 0 -> frame, then one per floor-constrained user
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    std::vector<Eigen::Index> up_row;
    std::vector<Eigen::Index> down_row;

    void build_constraints()
    {
        const Eigen::Index k = static_cast<Eigen::Index>(links.size());
        up_row.assign(num_up, kNone);
        down_row.assign(num_down, kNone);
        Eigen::Index rows = 1;
        if (floor_up > 0)
            for (auto& r : up_row)
                r = rows++;
        if (floor_down > 0)
            for (auto& r : down_row)
                r = rows++;

        a = Eigen::MatrixXd::Zero(rows, k);
        b = Eigen::VectorXd::Zero(rows);
        a.row(0).setOnes();
        b(0) = 1.0;
        for (Eigen::Index l = 0; l < k; ++l) {
            const Link& link = links[l];
            if (link.up_user != kNone && up_row[link.up_user] != kNone)
                a(up_row[link.up_user], l) = -1.0;
            if (link.down_user != kNone && down_row[link.down_user] != kNone)
                a(down_row[link.down_user], l) = -1.0;
        }
        for (Eigen::Index i = 0; i < num_up; ++i)
            if (up_row[i] != kNone)
                b(up_row[i]) = -floor_up;
        for (Eigen::Index j = 0; j < num_down; ++j)
            if (down_row[j] != kNone)
                b(down_row[j]) = -floor_down;
    }
};

/// Time-share vertex optimal for a fixed rate price mu.
struct PricedShare {
    double mu{0};
    Eigen::VectorXd gamma;
    Eigen::VectorXd rate;  ///< per-link rate while active
    Eigen::VectorXd duals; ///< LP multipliers
    double value{0};       ///< max sum gamma_k P_k*(mu)
    double delivered{0};   ///< sum gamma_k R_k(mu)
};

PricedShare price_time_shares(const TimeShareProblem& p, double mu)
{
    const Eigen::Index k = static_cast<Eigen::Index>(p.links.size());
    PricedShare share;
    share.mu = mu;
    share.rate.resize(k);
    Eigen::VectorXd worth(k);
    for (Eigen::Index l = 0; l < k; ++l) {
        share.rate(l) = p.links[l].curve.rate_at_marginal(mu);
        worth(l) = p.links[l].curve.conjugate(mu);
    }
    const lp::Result lp = lp::maximize(worth, p.a, p.b);
    if (lp.status == lp::Status::Infeasible)
        throw ConfigurationError("fairness floors cannot be met by the admissible links");
    if (lp.status != lp::Status::Optimal)
        throw SolverError("time-share program is unbounded");
    share.gamma = lp.x;
    share.duals = lp.duals;
    share.value = lp.objective;
    share.delivered = share.gamma.dot(share.rate);
    return share;
}

DualVars unpack_duals(const TimeShareProblem& p, const PricedShare& share)
{
    DualVars d;
    d.lambda_time = share.duals(0);
    d.mu_rate = share.mu;
    d.nu_up = Eigen::VectorXd::Zero(p.num_up);
    d.xi_down = Eigen::VectorXd::Zero(p.num_down);
    for (Eigen::Index i = 0; i < p.num_up; ++i)
        if (p.up_row[i] != kNone)
            d.nu_up(i) = share.duals(p.up_row[i]);
    for (Eigen::Index j = 0; j < p.num_down; ++j)
        if (p.down_row[j] != kNone)
            d.xi_down(j) = share.duals(p.down_row[j]);
    return d;
}

/// Fully decomposed Lagrangian: sum of per-link minima plus the constant terms.
double lagrangian_bound(const TimeShareProblem& p, const DualVars& d, double r_tot)
{
    double total = -d.lambda_time + d.mu_rate * r_tot + p.floor_up * d.nu_up.sum() + p.floor_down * d.xi_down.sum();
    for (const Link& link : p.links) {
        double price = d.lambda_time;
        if (link.up_user != kNone)
            price -= d.nu_up(link.up_user);
        if (link.down_user != kNone)
            price -= d.xi_down(link.down_user);
        total += link_subproblem(link.curve, price, d.mu_rate).value;
    }
    return total;
}

double residual(const TimeShareProblem& p, const Eigen::VectorXd& gamma, const Eigen::VectorXd& r_hat, double r_tot)
{
    double worst = std::max(0.0, gamma.sum() - 1.0);
    worst = std::max(worst, std::abs(r_hat.sum() - r_tot));
    worst = std::max(worst, std::max(0.0, -gamma.minCoeff()));
    worst = std::max(worst, std::max(0.0, -r_hat.minCoeff()));
    worst = std::max(worst, std::max(0.0, gamma.maxCoeff() - 1.0));
    Eigen::VectorXd up = Eigen::VectorXd::Zero(p.num_up);
    Eigen::VectorXd down = Eigen::VectorXd::Zero(p.num_down);
    for (std::size_t l = 0; l < p.links.size(); ++l) {
        const Link& link = p.links[l];
        if (link.up_user != kNone)
            up(link.up_user) += gamma(static_cast<Eigen::Index>(l));
        if (link.down_user != kNone)
            down(link.down_user) += gamma(static_cast<Eigen::Index>(l));
    }
    if (p.num_up > 0)
        worst = std::max(worst, std::max(0.0, p.floor_up - up.minCoeff()));
    if (p.num_down > 0)
        worst = std::max(worst, std::max(0.0, p.floor_down - down.minCoeff()));
    return worst;
}

SolveResult assemble(const TimeShareProblem& p, const Eigen::VectorXd& gamma, const Eigen::VectorXd& r_hat,
                     double r_tot)
{
    SolveResult result;
    result.allocation.gamma = Eigen::MatrixXd::Zero(p.out_rows, p.out_cols);
    result.allocation.r_hat = Eigen::MatrixXd::Zero(p.out_rows, p.out_cols);
    double power = 0;
    for (std::size_t l = 0; l < p.links.size(); ++l) {
        const Link& link = p.links[l];
        const double g = gamma(static_cast<Eigen::Index>(l));
        const double r = r_hat(static_cast<Eigen::Index>(l));
        result.allocation.gamma(link.out_row, link.out_col) = g;
        result.allocation.r_hat(link.out_row, link.out_col) = r;
        if (g > 0)
            power += g * link.curve.power(r / g);
    }
    result.p_tot_min = power;
    result.max_residual = residual(p, gamma, r_hat, r_tot);
    return result;
}

SolveResult solve_time_sharing(double r_tot, const TimeShareProblem& p, const SolverConfig& config)
{
    if (!(r_tot >= 0) || !std::isfinite(r_tot))
        throw DomainError("total rate must be finite and non-negative");
    if (p.links.empty())
        throw ConfigurationError("no admissible links in scenario");

    if (r_tot == 0.0) {
        // any feasible time share; zero power and zero multipliers
        const PricedShare share = price_time_shares(p, 0.0);
        SolveResult result = assemble(p, share.gamma, Eigen::VectorXd::Zero(share.gamma.size()), 0.0);
        result.duals = unpack_duals(p, share);
        result.duals.lambda_time = 0;
        result.duals.nu_up.setZero();
        result.duals.xi_down.setZero();
        return result;
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0;
    for (const Link& link : p.links) {
        lo = std::min(lo, link.curve.marginal(0.0));
        hi = std::max(hi, link.curve.marginal(r_tot));
    }
    // every link runs at >= r_tot at `hi`, and a positive price fills the frame
    PricedShare below = price_time_shares(p, lo);
    PricedShare above = price_time_shares(p, hi);

    int iterations = 0;
    while (iterations < config.max_iters && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi) {
        const double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi))
            break;
        PricedShare share = price_time_shares(p, mid);
        ++iterations;
        if (share.delivered < r_tot) {
            lo = mid;
            below = std::move(share);
        } else {
            hi = mid;
            above = std::move(share);
        }
    }

    // mix the bracketing vertices so the rate constraint holds exactly
    const double spread = above.delivered - below.delivered;
    const double theta = spread > 0 ? std::clamp((above.delivered - r_tot) / spread, 0.0, 1.0) : 0.0;
    Eigen::VectorXd gamma = theta * below.gamma + (1.0 - theta) * above.gamma;
    Eigen::VectorXd r_hat = theta * below.gamma.cwiseProduct(below.rate) +
                            (1.0 - theta) * above.gamma.cwiseProduct(above.rate);
    for (Eigen::Index l = 0; l < gamma.size(); ++l) {
        if (gamma(l) < config.gamma_floor) {
            gamma(l) = 0;
            r_hat(l) = 0;
        }
    }
    const double delivered = r_hat.sum();
    if (!(delivered > 0))
        throw SolverError("time-sharing recovery delivered no rate");
    r_hat *= r_tot / delivered;

    SolveResult result = assemble(p, gamma, r_hat, r_tot);
    result.iterations = iterations;

    const DualVars d_below = unpack_duals(p, below);
    const DualVars d_above = unpack_duals(p, above);
    const double bound_below = lagrangian_bound(p, d_below, r_tot);
    const double bound_above = lagrangian_bound(p, d_above, r_tot);
    if (bound_below >= bound_above) {
        result.duals = d_below;
        result.dual_bound = bound_below;
    } else {
        result.duals = d_above;
        result.dual_bound = bound_above;
    }
    result.duality_gap = std::max(0.0, result.p_tot_min - result.dual_bound) / result.p_tot_min;

    if (result.duality_gap > config.tol_gap || result.max_residual > config.tol_feas) {
        std::ostringstream os;
        os << "time-sharing solver stopped after " << iterations << " dual iterations with relative gap "
           << result.duality_gap << " and residual " << result.max_residual;
        throw ConvergenceError(os.str(), std::move(result));
    }
    return result;
}

} // namespace

SolveResult solve_min_total_power(double r_tot, const Scenario& s, const SolverConfig& config)
{
    validate(s);
    TimeShareProblem p;
    p.num_up = s.num_up();
    p.num_down = s.num_down();
    p.floor_up = s.gamma_min_up;
    p.floor_down = s.gamma_min_down;
    p.out_rows = p.num_up;
    p.out_cols = p.num_down;
    for (Eigen::Index i = 0; i < p.num_up; ++i) {
        for (Eigen::Index j = 0; j < p.num_down; ++j) {
            const Gains g = pair_gains(s, i, j);
            if (!fd_necessary_condition(g)) {
                if (s.exclude_invalid_pairs)
                    continue;
                throw PreconditionViolated("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                           ") fails the full-duplex condition " + detail::describe(g));
            }
            p.links.push_back({LinkCurve::full_duplex(g), i, j, i, j});
        }
    }
    p.build_constraints();
    return solve_time_sharing(r_tot, p, config);
}

SolveResult hd_baseline_min_power(double r_tot, const Scenario& s, const SolverConfig& config)
{
    validate(s);
    TimeShareProblem p;
    p.num_up = s.num_up();
    p.num_down = s.num_down();
    p.floor_up = s.gamma_min_up;
    p.floor_down = s.gamma_min_down;
    p.out_rows = p.num_up + p.num_down;
    p.out_cols = 1;
    for (Eigen::Index i = 0; i < p.num_up; ++i)
        p.links.push_back({LinkCurve::single_link(s.h_up(i)), i, kNone, i, 0});
    for (Eigen::Index j = 0; j < p.num_down; ++j)
        p.links.push_back({LinkCurve::single_link(s.h_down(j)), kNone, j, p.num_up + j, 0});
    p.build_constraints();
    return solve_time_sharing(r_tot, p, config);
}

double ee_at(double r_tot, const Scenario& s, const SolverConfig& config)
{
    if (r_tot == 0.0)
        return 0.0;
    return energy_efficiency(r_tot, solve_min_total_power(r_tot, s, config).p_tot_min, s);
}

double constraint_residual(const Allocation& alloc, double r_tot, const Scenario& s)
{
    const Eigen::MatrixXd& g = alloc.gamma;
    const Eigen::MatrixXd& r = alloc.r_hat;
    double worst = std::max(0.0, g.sum() - 1.0);
    worst = std::max(worst, std::abs(r.sum() - r_tot));
    worst = std::max(worst, std::max(0.0, -g.minCoeff()));
    worst = std::max(worst, std::max(0.0, g.maxCoeff() - 1.0));
    worst = std::max(worst, std::max(0.0, -r.minCoeff()));
    worst = std::max(worst, std::max(0.0, s.gamma_min_up - g.rowwise().sum().minCoeff()));
    worst = std::max(worst, std::max(0.0, s.gamma_min_down - g.colwise().sum().minCoeff()));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            if (r(i, j) > 0 && g(i, j) <= 0)
                worst = std::max(worst, r(i, j));
    return worst;
}

} // namespace fdee
