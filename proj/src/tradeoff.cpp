#include "fdee/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

namespace fdee {

SolveResult solve_at(double se, const Scenario& scenario, Duplex mode, const SolverConfig& config)
{
    return mode == Duplex::Full ? solve_min_total_power(se, scenario, config)
                                : hd_baseline_min_power(se, scenario, config);
}

TradeoffCurve trace_curve(const Scenario& scenario, const Eigen::VectorXd& se_grid, const SolverConfig& config,
                          Duplex mode)
{
    for (Eigen::Index k = 1; k < se_grid.size(); ++k)
        if (!(se_grid(k) > se_grid(k - 1)))
            throw ConfigurationError("SE grid must be strictly increasing");
    if (se_grid.size() > 0 && !(se_grid(0) >= 0))
        throw ConfigurationError("SE grid must be non-negative");

    TradeoffCurve curve;
    curve.se = se_grid;
    curve.p_min.resize(se_grid.size());
    curve.ee.resize(se_grid.size());
    for (Eigen::Index k = 0; k < se_grid.size(); ++k) {
        try {
            const double p = solve_at(se_grid(k), scenario, mode, config).p_tot_min;
            curve.p_min(k) = p;
            curve.ee(k) = energy_efficiency(se_grid(k), p, scenario);
        } catch (const std::exception& e) {
            std::throw_with_nested(SolverError("curve point " + std::to_string(k) + " (se=" +
                                               std::to_string(se_grid(k)) + "): " + e.what()));
        }
    }
    return curve;
}

EeOptimum max_ee(const Scenario& scenario, double se_lo, double se_hi, double tol_se, const SolverConfig& config,
                 Duplex mode)
{
    if (!(se_lo >= 0) || !(se_hi > se_lo))
        throw ConfigurationError("SE interval must satisfy 0 <= lo < hi");
    if (!(tol_se > 0))
        throw ConfigurationError("SE tolerance must be positive");

    EeOptimum best;
    const auto evaluate = [&](double se) {
        ++best.evaluations;
        if (se == 0.0)
            return EeOptimum{0.0, 0.0, 0.0, {}, 0};
        SolveResult r = solve_at(se, scenario, mode, config);
        return EeOptimum{se, energy_efficiency(se, r.p_tot_min, scenario), r.p_tot_min, std::move(r.allocation), 0};
    };
    const auto ee_of = [&](double se) { return evaluate(se).ee; };
    const auto flat = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y)); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = se_lo;
    double b = se_hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = ee_of(c);
    double fd = ee_of(d);
    while (b - a > tol_se / 2) {
        if (fc < fd && !flat(fc, fd)) {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = ee_of(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = ee_of(c);
        }
    }

    const int evals = best.evaluations;
    EeOptimum candidate = evaluate((a + b) / 2);
    for (double endpoint : {se_lo, se_hi}) {
        EeOptimum e = evaluate(endpoint);
        if (e.ee > candidate.ee)
            candidate = std::move(e);
    }
    candidate.evaluations = evals + 3;
    return candidate;
}

UnimodalityReport unimodality_report(const Eigen::VectorXd& values, double tol)
{
    const Eigen::Index n = values.size();
    UnimodalityReport report;
    if (n < 3)
        return report;
    Eigen::VectorXd suffix_max(n);
    suffix_max(n - 1) = values(n - 1);
    for (Eigen::Index k = n - 2; k >= 0; --k)
        suffix_max(k) = std::max(values(k), suffix_max(k + 1));
    double prefix_max = values(0);
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
        if (prefix_max - values(k) > tol && suffix_max(k + 1) - values(k) > tol) {
            report.unimodal = false;
            report.first_violation = k;
            return report;
        }
        prefix_max = std::max(prefix_max, values(k));
    }
    return report;
}

} // namespace fdee
