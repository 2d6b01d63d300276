#include "fdee/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fdee/harness.hpp"
#include "fdee/multi_user.hpp"
#include "fdee/oracle.hpp"
#include "fdee/tradeoff.hpp"

namespace fdee::verify {

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Gains random_gains(std::mt19937_64& rng)
{
    Gains g;
    g.h_up = log_uniform(rng, 0.1, 1000.0);
    g.h_down = log_uniform(rng, 0.1, 1000.0);
    g.h_cci = log_uniform(rng, 0.1, 1000.0);
    g.chi = uniform(rng, 0.0, 1.0);
    return g;
}

double rel_err(double value, double reference)
{
    return std::abs(value - reference) / std::abs(reference);
}

Scenario single_pair_scenario(const Gains& g, double p_fix)
{
    Scenario s;
    s.h_up = Eigen::VectorXd::Constant(1, g.h_up);
    s.h_down = Eigen::VectorXd::Constant(1, g.h_down);
    s.h_cci = Eigen::MatrixXd::Constant(1, 1, g.h_cci);
    s.chi = g.chi;
    s.bandwidth_hz = 1.0;
    s.omega = 1.0;
    s.p_fix_w = p_fix;
    return s;
}

Scenario physical_scenario(Eigen::Index users, std::uint64_t seed, std::mt19937_64& rng)
{
    auto cfg = harness::preset_config(harness::Preset::Custom);
    cfg.m = users;
    cfg.n = users;
    const double chi_db[] = {-std::numeric_limits<double>::infinity(), -20.0, -10.0, 0.0};
    return harness::make_scenario(cfg, seed, chi_db[std::uniform_int_distribution<int>(0, 3)(rng)]);
}

/// Two pairs sharing one user: (1 x 2) or (2 x 1), all pairs valid.
Scenario two_pair_scenario(std::mt19937_64& rng, bool shared_uplink)
{
    for (;;) {
        const double chi = uniform(rng, 0.0, 1.0);
        Scenario s;
        s.h_up = Eigen::VectorXd(shared_uplink ? 1 : 2);
        s.h_down = Eigen::VectorXd(shared_uplink ? 2 : 1);
        for (auto& h : s.h_up.reshaped())
            h = log_uniform(rng, 0.1, 1000.0);
        for (auto& h : s.h_down.reshaped())
            h = log_uniform(rng, 0.1, 1000.0);
        s.h_cci = Eigen::MatrixXd(s.h_up.size(), s.h_down.size());
        for (auto& h : s.h_cci.reshaped())
            h = log_uniform(rng, 0.1, 1000.0);
        s.chi = chi;
        bool ok = true;
        for (Eigen::Index i = 0; i < s.h_up.size(); ++i)
            for (Eigen::Index j = 0; j < s.h_down.size(); ++j)
                ok = ok && fd_necessary_condition(pair_gains(s, i, j));
        if (!ok)
            continue;
        s.bandwidth_hz = 1.0;
        s.omega = 1.0;
        s.p_fix_w = 0.1;
        s.gamma_min_up = uniform(rng, 0.0, shared_uplink ? 0.9 : 0.45);
        s.gamma_min_down = uniform(rng, 0.0, shared_uplink ? 0.45 : 0.9);
        return s;
    }
}

Eigen::VectorXd linspace(Eigen::Index n, double lo, double hi)
{
    return Eigen::VectorXd::LinSpaced(n, lo, hi);
}

template <typename... Args>
std::string text(const char* fmt, Args... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

} // namespace

Gains random_valid_gains(std::mt19937_64& rng)
{
    for (;;) {
        const Gains g = random_gains(rng);
        if (fd_necessary_condition(g))
            return g;
    }
}

Gains random_invalid_gains(std::mt19937_64& rng)
{
    for (;;) {
        const Gains g = random_gains(rng);
        if (!fd_necessary_condition(g))
            return g;
    }
}

CheckResult closed_form_vs_oracle(int instances, std::uint64_t seed)
{
    CheckResult r{"closed-form minimum power vs oracle", true, 0, 0.0, 1e-4, ""};
    std::mt19937_64 rng(seed);
    for (int k = 0; k < instances; ++k) {
        const Gains g = random_valid_gains(rng);
        const double rate = 10.0 - uniform(rng, 0.0, 10.0);  // (0, 10]
        const double err = rel_err(min_power(rate, g).value, oracle::min_power_single(rate, g).value);
        r.worst = std::max(r.worst, err);
        ++r.instances;
    }
    r.passed = r.worst <= r.tolerance;
    r.detail = text("worst relative error %.3e", r.worst);
    return r;
}

CheckResult min_power_convexity(int instances, std::uint64_t seed)
{
    CheckResult r{"minimum power increasing and convex in rate", true, 0, 0.0, 1e-8, ""};
    std::mt19937_64 rng(seed);
    long violations = 0;
    double min_first = std::numeric_limits<double>::infinity();
    double min_second = std::numeric_limits<double>::infinity();
    for (int k = 0; k < instances; ++k) {
        const Gains g = random_valid_gains(rng);
        constexpr int kGrid = 200;
        Eigen::VectorXd p(kGrid);
        for (int t = 0; t < kGrid; ++t)
            p(t) = min_power(12.0 * (t + 1) / kGrid, g).value;
        const Eigen::VectorXd first = p.tail(kGrid - 1) - p.head(kGrid - 1);
        const Eigen::VectorXd second = first.tail(kGrid - 2) - first.head(kGrid - 2);
        min_first = std::min(min_first, first.minCoeff());
        min_second = std::min(min_second, second.minCoeff());
        violations += (first.array() <= 0).count() + (second.array() < -r.tolerance).count();
        ++r.instances;
    }
    r.worst = std::max(0.0, -min_second);
    r.passed = violations == 0;
    r.detail = text("%ld violations, min first difference %.3e, min second difference %.3e", violations, min_first,
                    min_second);
    return r;
}

CheckResult case_continuity(int instances, std::uint64_t seed)
{
    CheckResult r{"continuity across the case boundary", true, 0, 0.0, 1e-9, ""};
    constexpr double kSlopeTol = 1e-6;
    std::mt19937_64 rng(seed);
    double worst_value = 0;
    double worst_slope = 0;
    while (r.instances < instances) {
        const Gains g = random_valid_gains(rng);
        const double rb = case_boundary_rate(g);
        if (!(rb > 1e-3))
            continue;  // thresholds too close to 1 for a two-sided stencil
        const double edge = downlink_threshold(g) > 1.0 ? downlink_only_power(rb, g) : uplink_only_power(rb, g);
        const double inner = interior_power(rb, g);
        worst_value = std::max(worst_value, rel_err(inner, edge));

        const auto f = [&](double x) { return min_power(x, g).value; };
        const double h = 1e-4 * rb;
        const double left = oracle::one_sided_derivative(f, rb, h, false);
        const double right = oracle::one_sided_derivative(f, rb, h, true);
        worst_slope = std::max(worst_slope, rel_err(right, left));
        ++r.instances;
    }
    r.worst = worst_value;
    r.passed = worst_value <= r.tolerance && worst_slope <= kSlopeTol;
    r.detail = text("worst value gap %.3e (tol %.0e), worst slope gap %.3e (tol %.0e)", worst_value, r.tolerance,
                    worst_slope, kSlopeTol);
    return r;
}

CheckResult half_duplex_dominance(int instances, std::uint64_t seed)
{
    CheckResult r{"half duplex no worse when the condition fails", true, 0, 0.0, 1e-12, ""};
    std::mt19937_64 rng(seed);
    long violations = 0;
    long samples = 0;
    for (int k = 0; k < instances; ++k) {
        const Gains g = random_invalid_gains(rng);
        for (int t = 1; t <= 20; ++t) {
            const double rate = 0.5 * t;
            const double hd = hd_min_power(rate, g.h_up, g.h_down);
            const double fd = oracle::min_power_single(rate, g).value;
            const double fd_formula = fd_min_power(rate, g);
            // positive means full duplex found a cheaper operating point
            const double advantage = (hd - std::min(fd, fd_formula)) / hd;
            r.worst = std::max(r.worst, advantage);
            violations += advantage > r.tolerance;
            ++samples;
        }
        ++r.instances;
    }
    r.passed = violations == 0;
    r.detail = text("%ld violations over %ld rate samples, worst relative FD advantage %.3e", violations, samples,
                    r.worst);
    return r;
}

CheckResult ee_unimodality(int single_pair, int multi_pair, int points, std::uint64_t seed)
{
    CheckResult r{"EE-SE curves unimodal", true, 0, 0.0, 1e-9, ""};
    std::mt19937_64 rng(seed);
    long failures = 0;
    std::string first_failure;
    const auto check = [&](const Scenario& s, double se_hi, const char* kind, int index) {
        const TradeoffCurve c = trace_curve(s, linspace(points, se_hi / points, se_hi));
        const auto report = unimodality_report(c, r.tolerance * c.ee.maxCoeff());
        if (!report.unimodal) {
            ++failures;
            if (first_failure.empty())
                first_failure = text(", first failure: %s scenario %d at point %ld", kind, index,
                                     static_cast<long>(*report.first_violation));
        }
        ++r.instances;
    };
    for (int k = 0; k < single_pair; ++k)
        check(single_pair_scenario(random_valid_gains(rng), 0.1), 12.0, "single-pair", k);
    for (int k = 0; k < multi_pair; ++k)
        check(physical_scenario(6, seed + 1000 + static_cast<std::uint64_t>(k), rng), 24.0, "6-pair", k);
    r.worst = static_cast<double>(failures);
    r.passed = failures == 0;
    r.detail = text("%ld of %ld curves (%d points) not unimodal", failures, r.instances, points) + first_failure;
    return r;
}

CheckResult solver_vs_oracle(int instances, std::uint64_t seed)
{
    CheckResult r{"time-sharing solver vs grid oracle", true, 0, 0.0, 1e-2, ""};
    constexpr double kResolution = 5e-3;
    constexpr double kGap = 1e-5;
    constexpr double kResidual = 1e-6;
    constexpr double kReduction = 1e-6;
    std::mt19937_64 rng(seed);
    double worst_res = 0;
    double worst_gap = 0;
    double worst_feas = 0;
    double worst_reduction = 0;
    for (int k = 0; k < instances; ++k) {
        const Scenario s = two_pair_scenario(rng, k % 2 == 0);
        const double r_tot = uniform(rng, 0.5, 8.0);
        const SolveResult got = solve_min_total_power(r_tot, s);
        const oracle::Estimate ref = oracle::min_power_multi(r_tot, s);
        r.worst = std::max(r.worst, rel_err(got.p_tot_min, ref.value));
        worst_res = std::max(worst_res, ref.resolution / ref.value);
        worst_gap = std::max(worst_gap, got.duality_gap);
        worst_feas = std::max(worst_feas, constraint_residual(got.allocation, r_tot, s));
        ++r.instances;
    }
    for (int k = 0; k < 20; ++k) {
        const Gains g = random_valid_gains(rng);
        const Scenario s = single_pair_scenario(g, 0.1);
        for (int t = 1; t <= 20; ++t) {
            const double rate = 0.5 * t;
            worst_reduction =
                std::max(worst_reduction, rel_err(solve_min_total_power(rate, s).p_tot_min, min_power(rate, g).value));
        }
    }
    r.passed = r.worst <= r.tolerance && worst_res <= kResolution && worst_gap <= kGap && worst_feas <= kResidual &&
               worst_reduction <= kReduction;
    r.detail = text("worst oracle mismatch %.3e (tol %.0e), oracle resolution %.3e (tol %.0e), duality gap %.3e "
                    "(tol %.0e), residual %.3e (tol %.0e), 1x1 reduction %.3e (tol %.0e)",
                    r.worst, r.tolerance, worst_res, kResolution, worst_gap, kGap, worst_feas, kResidual,
                    worst_reduction, kReduction);
    return r;
}

CheckResult max_ee_vs_grid(int scenarios, std::uint64_t seed)
{
    CheckResult r{"golden-section EE maximum vs dense grid", true, 0, 0.0, 1e-4, ""};
    constexpr int kGrid = 1000;
    std::mt19937_64 rng(seed);
    for (int k = 0; k < scenarios; ++k) {
        const bool single = k % 2 == 0;
        const Scenario s = single ? single_pair_scenario(random_valid_gains(rng), 0.1)
                                  : physical_scenario(3, seed + 2000 + static_cast<std::uint64_t>(k), rng);
        const double lo = 0.0;
        const double hi = single ? 12.0 : 24.0;
        const auto argmax = [&](double a, double b) {
            const Eigen::VectorXd grid = linspace(kGrid, a, b);
            Eigen::Index best = 0;
            double best_ee = -1;
            for (Eigen::Index t = 0; t < kGrid; ++t) {
                const double ee = grid(t) == 0.0 ? 0.0 : ee_at(grid(t), s);
                if (ee > best_ee) {
                    best_ee = ee;
                    best = t;
                }
            }
            return std::pair{grid, best};
        };
        // coarse pass, then a second dense pass over the two neighbouring cells
        const auto [coarse, kc] = argmax(lo, hi);
        const double step = (hi - lo) / (kGrid - 1);
        const auto [fine, kf] = argmax(std::max(lo, coarse(kc) - step), std::min(hi, coarse(kc) + step));
        const EeOptimum opt = max_ee(s, lo, hi, r.tolerance);
        r.worst = std::max(r.worst, std::abs(opt.se - fine(kf)));
        ++r.instances;
    }
    r.passed = r.worst <= r.tolerance;
    r.detail = text("worst |se* - grid argmax| = %.3e bit/s/Hz", r.worst);
    return r;
}

std::vector<CheckResult> run_all(std::uint64_t seed, double scale)
{
    const auto n = [&](int full) { return std::max(1, static_cast<int>(std::lround(full * scale))); };
    return {closed_form_vs_oracle(n(1000), seed),
            min_power_convexity(n(1000), seed + 1),
            case_continuity(n(200), seed + 2),
            half_duplex_dominance(n(500), seed + 3),
            ee_unimodality(n(100), n(20), 400, seed + 4),
            solver_vs_oracle(n(50), seed + 5),
            max_ee_vs_grid(n(20), seed + 6)};
}

std::string format_line(const CheckResult& r)
{
    return std::string(r.passed ? "PASS" : "FAIL") + "  " + r.name + ": " + std::to_string(r.instances) +
           " instances, " + r.detail;
}

} // namespace fdee::verify
