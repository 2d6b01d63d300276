#include "fdee/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "fdee/errors.hpp"

namespace fdee::oracle {

namespace {

/// p_down meeting the rate target for a given p_up, straight from
/// (1 + p_up h_up/(1+chi)) (1 + p_down h_down/(1 + p_up h_cci)) = 2^R.
double downlink_for(double excess, double p_up, const Gains& g)
{
    const double c = 1.0 + g.chi;
    const double up_term = p_up * g.h_up / c;               // uplink SNR
    const double down_snr = (excess - up_term) / (1.0 + up_term);
    return std::max(0.0, down_snr * (1.0 + p_up * g.h_cci) / g.h_down);
}

} // namespace

Estimate min_power_single(double rate, const Gains& g, double resolution)
{
    if (!(rate >= 0) || !(resolution > 0))
        throw DomainError("oracle: need rate >= 0 and resolution > 0");
    if (rate == 0.0)
        return {0.0, 0.0};

    const double excess = std::expm1(rate * std::log(2.0));  // 2^R - 1
    const double p_up_max = (1.0 + g.chi) * excess / g.h_up;
    const auto total = [&](double p_up) { return p_up + downlink_for(excess, p_up, g); };

    constexpr int kScan = 64;
    double best_f = total(0.0);
    int best_k = 0;
    for (int k = 1; k <= kScan; ++k) {
        const double x = p_up_max * k / kScan;
        const double f = total(x);
        if (f < best_f) {
            best_f = f;
            best_k = k;
        }
    }

    double a = p_up_max * std::max(0, best_k - 1) / kScan;
    double b = p_up_max * std::min(kScan, best_k + 1) / kScan;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = total(c);
    double fd = total(d);
    for (int it = 0; it < 300 && b - a > resolution * p_up_max; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = total(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = total(d);
        }
    }
    for (double x : {c, d, (a + b) / 2}) {
        const double f = total(x);
        if (f < best_f) {
            best_f = f;
        }
    }
    const double spread = std::max(total(a), total(b)) - best_f;
    return {best_f, std::max(spread, 4 * std::numeric_limits<double>::epsilon() * best_f)};
}

Estimate min_power_multi(double r_tot, const Scenario& s, int grid_steps, int zoom_levels)
{
    struct Pair {
        Eigen::Index i;
        Eigen::Index j;
        Gains g;
    };
    std::vector<Pair> pairs;
    for (Eigen::Index i = 0; i < s.h_up.size(); ++i)
        for (Eigen::Index j = 0; j < s.h_down.size(); ++j)
            pairs.push_back({i, j, {s.h_up(i), s.h_down(j), s.h_cci(i, j), s.chi}});
    if (pairs.empty() || pairs.size() > 2)
        throw ConfigurationError("oracle: multi-pair grid supports one or two pairs");
    if (grid_steps < 2)
        throw ConfigurationError("oracle: need at least two grid steps");
    if (r_tot == 0.0)
        return {0.0, 0.0};

    const double tol = 1e-12;
    const auto feasible = [&](double g0, double g1) {
        if (g0 < 0 || g1 < 0 || g0 + g1 > 1.0 + tol)
            return false;
        Eigen::VectorXd up = Eigen::VectorXd::Zero(s.h_up.size());
        Eigen::VectorXd down = Eigen::VectorXd::Zero(s.h_down.size());
        const std::array<double, 2> gam{g0, g1};
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            up(pairs[k].i) += gam[k];
            down(pairs[k].j) += gam[k];
        }
        return up.minCoeff() >= s.gamma_min_up - tol && down.minCoeff() >= s.gamma_min_down - tol;
    };
    const auto piece = [&](const Gains& g, double gamma, double r_hat) {
        if (r_hat <= 0)
            return 0.0;
        if (gamma <= 0)
            return std::numeric_limits<double>::infinity();
        return gamma * min_power_single(r_hat / gamma, g, 1e-9).value;
    };
    const auto cost = [&](double g0, double g1, double r0) {
        if (pairs.size() == 1)
            return piece(pairs[0].g, g0, r_tot);
        return piece(pairs[0].g, g0, r0) + piece(pairs[1].g, g1, r_tot - r0);
    };

    // box: [lo, hi] per coordinate (gamma0, gamma1, r_hat0)
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, pairs.size() == 2 ? 1.0 : 0.0, pairs.size() == 2 ? r_tot : 0.0};
    std::array<double, 3> best{0, 0, 0};
    double best_f = std::numeric_limits<double>::infinity();
    double previous = best_f;

    for (int level = 0; level <= zoom_levels; ++level) {
        const std::array<int, 3> steps{grid_steps, pairs.size() == 2 ? grid_steps : 0,
                                       pairs.size() == 2 ? grid_steps : 0};
        const auto at = [&](int axis, int k) {
            return steps[axis] == 0 ? lo[axis] : lo[axis] + (hi[axis] - lo[axis]) * k / steps[axis];
        };
        previous = best_f;
        for (int a = 0; a <= steps[0]; ++a) {
            for (int b = 0; b <= steps[1]; ++b) {
                const double g0 = at(0, a);
                const double g1 = at(1, b);
                if (!feasible(g0, g1))
                    continue;
                for (int r = 0; r <= steps[2]; ++r) {
                    const double r0 = at(2, r);
                    const double f = cost(g0, g1, r0);
                    if (f < best_f) {
                        best_f = f;
                        best = {g0, g1, r0};
                    }
                }
            }
        }
        if (!std::isfinite(best_f))
            throw ConfigurationError("oracle: no feasible grid point");
        if (level == zoom_levels)
            break;
        // shrink each box side to 4 grid cells around the incumbent
        const std::array<double, 3> upper{1.0, 1.0, r_tot};
        for (int axis = 0; axis < 3; ++axis) {
            if (steps[axis] == 0)
                continue;
            const double half = 2.0 * (hi[axis] - lo[axis]) / steps[axis];
            lo[axis] = std::max(0.0, best[axis] - half);
            hi[axis] = std::min(upper[axis], best[axis] + half);
        }
    }
    return {best_f, std::max(previous - best_f, 0.0)};
}

ConvexityReport convexity_probe(const std::function<double(double)>& f, double lo, double hi, int n)
{
    if (n < 3)
        throw DomainError("convexity probe needs at least 3 samples");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        v[static_cast<std::size_t>(k)] = f(lo + (hi - lo) * k / (n - 1));

    ConvexityReport report;
    report.samples = n;
    report.min_second_difference = std::numeric_limits<double>::infinity();
    report.min_midpoint_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < v.size(); ++k)
        report.min_second_difference = std::min(report.min_second_difference, v[k - 1] - 2 * v[k] + v[k + 1]);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 2; j < v.size(); j += 2)
            report.min_midpoint_slack = std::min(report.min_midpoint_slack, (v[i] + v[j]) / 2 - v[(i + j) / 2]);
    return report;
}

double finite_difference_check(const std::function<double(double)>& f, double x, double analytic, double h)
{
    if (!(h > 0))
        throw DomainError("finite difference step must be positive");
    const double numeric = (f(x + h) - f(x - h)) / (2 * h);
    const double err = std::abs(numeric - analytic);
    return analytic != 0.0 ? err / std::abs(analytic) : err;
}

double one_sided_derivative(const std::function<double(double)>& f, double x, double h, bool right)
{
    if (!(h > 0))
        throw DomainError("finite difference step must be positive");
    if (right)
        return (-3 * f(x) + 4 * f(x + h) - f(x + 2 * h)) / (2 * h);
    return (3 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (2 * h);
}

} // namespace fdee::oracle
