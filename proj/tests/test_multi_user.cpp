#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fdee/harness.hpp"
#include "fdee/multi_user.hpp"
#include "fdee/oracle.hpp"
#include "fdee/verification.hpp"

using namespace fdee;

namespace {

const Gains kDownlinkFavoured{5.0, 10.0, 0.5, 0.2};
const Gains kInterior{20.0, 10.0, 0.5, 0.2};

Scenario make(const Eigen::VectorXd& up, const Eigen::VectorXd& down, const Eigen::MatrixXd& cci, double chi,
              double floor_up = 0.0, double floor_down = 0.0)
{
    Scenario s;
    s.h_up = up;
    s.h_down = down;
    s.h_cci = cci;
    s.chi = chi;
    s.p_fix_w = 0.1;
    s.gamma_min_up = floor_up;
    s.gamma_min_down = floor_down;
    return s;
}

Scenario one_pair(const Gains& g)
{
    return make(Eigen::VectorXd::Constant(1, g.h_up), Eigen::VectorXd::Constant(1, g.h_down),
                Eigen::MatrixXd::Constant(1, 1, g.h_cci), g.chi);
}

Scenario drop(Eigen::Index users, std::uint64_t seed, double chi_db = -10.0)
{
    auto cfg = harness::preset_config(harness::Preset::Custom);
    cfg.m = users;
    cfg.n = users;
    return harness::make_scenario(cfg, seed, chi_db);
}

void check_allocation(const Allocation& a, const Scenario& s, double tol)
{
    CHECK((a.gamma.array() >= 0).all());
    CHECK((a.gamma.array() <= 1).all());
    CHECK((a.r_hat.array() >= 0).all());
    CHECK(((a.r_hat.array() > 0) <= (a.gamma.array() > 0)).all());
    CHECK(a.gamma.sum() <= 1 + tol);
    CHECK(a.gamma.rowwise().sum().minCoeff() >= s.gamma_min_up - tol);
    CHECK(a.gamma.colwise().sum().minCoeff() >= s.gamma_min_down - tol);
}

} // namespace

TEST_CASE("perspective cost")
{
    CHECK(perspective_cost(1.0, 3.0, kInterior) == min_power(3.0, kInterior).value);
    CHECK(perspective_cost(0.5, 0.5, kDownlinkFavoured) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(perspective_cost(0.0, 0.0, kInterior) == 0.0);
    CHECK_THROWS_AS(perspective_cost(0.0, 1.0, kInterior), DomainError);
    CHECK_THROWS_AS(perspective_cost(1.5, 1.0, kInterior), DomainError);
}

TEST_CASE("perspective cost is jointly convex")
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        const Gains g = verify::random_valid_gains(rng);
        const double g1 = 0.01 + 0.99 * u(rng);
        const double g2 = 0.01 + 0.99 * u(rng);
        const double r1 = 5.0 * u(rng);
        const double r2 = 5.0 * u(rng);
        const double f1 = perspective_cost(g1, r1, g);
        const double f2 = perspective_cost(g2, r2, g);
        const double mid = perspective_cost((g1 + g2) / 2, (r1 + r2) / 2, g);
        CHECK(mid <= (f1 + f2) / 2 + 1e-10 * std::max(1.0, (f1 + f2) / 2));
    }
}

TEST_CASE("pair subproblem edge cases")
{
    DualVars d;
    d.nu_up = Eigen::VectorXd::Zero(1);
    d.xi_down = Eigen::VectorXd::Zero(1);
    auto sol = pair_subproblem(d, 0, 0, kInterior);
    CHECK(sol.gamma == 0.0);
    CHECK(sol.r_hat == 0.0);
    CHECK(sol.value == 0.0);

    d.mu_rate = -1.0;
    d.lambda_time = 0.0;
    d.nu_up(0) = 0.3;  // negative time price
    sol = pair_subproblem(d, 0, 0, kInterior);
    CHECK(sol.r_hat == 0.0);
    CHECK(sol.value == doctest::Approx(-0.3));
}

TEST_CASE("pair subproblem against nested brute force")
{
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const Gains g = verify::random_valid_gains(rng);
        DualVars d;
        d.nu_up = Eigen::VectorXd::Zero(1);
        d.xi_down = Eigen::VectorXd::Zero(1);
        d.mu_rate = marginal_power(0.5 + 6.0 * u(rng), g);
        const auto probe = pair_subproblem(d, 0, 0, g);  // value at zero time price
        d.lambda_time = -probe.value * (0.2 + 1.6 * u(rng));
        const PairSolution sol = pair_subproblem(d, 0, 0, g);

        // nested 1-D searches: gamma on a grid, r_hat by golden section
        double best = 0.0;  // gamma = 0
        for (int a = 1; a <= 50; ++a) {
            const double gamma = a / 50.0;
            const auto f = [&](double r) {
                return perspective_cost(gamma, r, g) + d.lambda_time * gamma - d.mu_rate * r;
            };
            double lo = 0.0;
            double hi = 12.0 * gamma;
            for (int it = 0; it < 200; ++it) {
                const double m1 = lo + (hi - lo) / 3;
                const double m2 = hi - (hi - lo) / 3;
                if (f(m1) < f(m2))
                    hi = m2;
                else
                    lo = m1;
            }
            best = std::min(best, f((lo + hi) / 2));
        }
        CHECK(sol.value <= best + 1e-9 * std::abs(best));
        CHECK(sol.value == doctest::Approx(best).epsilon(1e-7));
        if (sol.gamma > 0) {
            const auto p = [&](double r) { return min_power(r, g).value; };
            CHECK(oracle::finite_difference_check(p, sol.r_hat, d.mu_rate, 1e-6) < 1e-5);
        }
    }
}

TEST_CASE("single pair reduces to the closed form")
{
    for (const Gains& g : {kInterior, kDownlinkFavoured}) {
        const Scenario s = one_pair(g);
        for (int t = 1; t <= 20; ++t) {
            const double r = 0.5 * t;
            const SolveResult res = solve_min_total_power(r, s);
            CHECK(res.p_tot_min == doctest::Approx(min_power(r, g).value).epsilon(1e-6));
            CHECK(res.allocation.gamma(0, 0) == doctest::Approx(1.0));
            CHECK(res.allocation.r_hat(0, 0) == doctest::Approx(r));
        }
    }
}

TEST_CASE("zero rate")
{
    const Scenario s = drop(4, 5);
    const SolveResult res = solve_min_total_power(0.0, s);
    CHECK(res.p_tot_min == 0.0);
    CHECK(res.allocation.r_hat.sum() == 0.0);
    check_allocation(res.allocation, s, 1e-9);
    CHECK(ee_at(0.0, s) == 0.0);
    CHECK_THROWS_AS(solve_min_total_power(-1.0, s), DomainError);
}

TEST_CASE("two pairs against the grid oracle")
{
    Eigen::VectorXd up(1);
    up << 30.0;
    Eigen::VectorXd down(2);
    down << 8.0, 25.0;
    Eigen::MatrixXd cci(1, 2);
    cci << 0.4, 2.0;
    const Scenario s = make(up, down, cci, 0.3, 0.0, 0.2);
    for (double r : {1.0, 3.0, 6.0}) {
        const SolveResult res = solve_min_total_power(r, s);
        const auto ref = oracle::min_power_multi(r, s);
        CHECK(ref.resolution <= 5e-3 * ref.value);
        CHECK(res.p_tot_min == doctest::Approx(ref.value).epsilon(1e-2));
        CHECK(res.p_tot_min <= ref.value * (1 + 1e-9));
        CHECK(res.duality_gap <= 1e-5);
        CHECK(constraint_residual(res.allocation, r, s) <= 1e-6);
    }
}

TEST_CASE("solutions of physical drops are feasible with a closed gap")
{
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const Scenario s = drop(6, seed);
        for (double r : {0.5, 4.0, 8.0, 14.0}) {
            const SolveResult res = solve_min_total_power(r, s);
            CHECK(res.duality_gap <= 1e-5);
            CHECK(res.max_residual <= 1e-6);
            CHECK(constraint_residual(res.allocation, r, s) <= 1e-6);
            CHECK(res.dual_bound <= res.p_tot_min * (1 + 1e-12));
            check_allocation(res.allocation, s, 1e-6);
            CHECK((res.duals.nu_up.array() >= 0).all());
            CHECK((res.duals.xi_down.array() >= 0).all());
            CHECK(res.duals.lambda_time >= 0);
        }
    }
}

TEST_CASE("minimum total power is increasing and convex in the rate")
{
    for (std::uint64_t seed = 11; seed <= 14; ++seed) {
        const Scenario s = drop(5, seed);
        const auto report = oracle::convexity_probe(
            [&](double r) { return solve_min_total_power(r, s).p_tot_min; }, 0.0, 12.0, 61);
        CHECK(report.min_second_difference >= -1e-7);
        double prev = -1;
        for (int t = 0; t <= 24; ++t) {
            const double p = solve_min_total_power(0.5 * t, s).p_tot_min;
            CHECK(p >= prev);
            prev = p;
        }
    }
}

TEST_CASE("pairs failing the condition")
{
    Eigen::VectorXd up(2);
    up << 10.0, 10.0;
    Eigen::VectorXd down(2);
    down << 10.0, 10.0;
    Eigen::MatrixXd cci(2, 2);
    cci << 0.5, 20.0, 0.5, 0.5;  // pair (0, 1) is invalid
    Scenario s = make(up, down, cci, 0.1);
    CHECK_THROWS_AS(solve_min_total_power(2.0, s), PreconditionViolated);
    s.exclude_invalid_pairs = true;
    const SolveResult res = solve_min_total_power(2.0, s);
    CHECK(res.allocation.gamma(0, 1) == 0.0);
    CHECK(res.allocation.r_hat(0, 1) == 0.0);
}

TEST_CASE("infeasible fairness floors")
{
    Scenario s = drop(4, 3);
    s.gamma_min_up = 0.3;
    CHECK_THROWS_AS(solve_min_total_power(2.0, s), ConfigurationError);
    CHECK_THROWS_AS(hd_baseline_min_power(2.0, s), ConfigurationError);
}

TEST_CASE("iteration cap without convergence")
{
    const Scenario s = drop(6, 2);
    SolverConfig cfg;
    cfg.max_iters = 1;
    try {
        solve_min_total_power(8.0, s, cfg);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.best_iterate().duality_gap > cfg.tol_gap);
        CHECK(e.best_iterate().max_residual <= 1e-6);
    }
}

TEST_CASE("half-duplex baseline")
{
    // a strong uplink and a weak downlink: all the rate goes up
    const Scenario s = make(Eigen::VectorXd::Constant(1, 40.0), Eigen::VectorXd::Constant(1, 0.5),
                            Eigen::MatrixXd::Constant(1, 1, 0.1), 0.0);
    const SolveResult res = hd_baseline_min_power(3.0, s);
    CHECK(res.p_tot_min == doctest::Approx((std::exp2(3.0) - 1) / 40.0).epsilon(1e-9));
    CHECK(res.allocation.gamma.rows() == 2);
    CHECK(res.allocation.gamma(0, 0) == doctest::Approx(1.0));

    // equal CNRs with pinned floors: equal shares, and the symmetric closed form
    const double h = 7.0;
    const Scenario eq = make(Eigen::VectorXd::Constant(3, h), Eigen::VectorXd::Constant(3, h),
                             Eigen::MatrixXd::Constant(3, 3, 0.1), 0.0, 1.0 / 6, 1.0 / 6);
    for (double r : {1.0, 4.0, 9.0}) {
        const SolveResult sym = hd_baseline_min_power(r, eq);
        const double gamma = 1.0 / 6;
        CHECK(sym.p_tot_min == doctest::Approx(6 * gamma * (std::exp2(r / (6 * gamma)) - 1) / h).epsilon(1e-9));
        CHECK(sym.allocation.gamma.isApproxToConstant(gamma, 1e-9));
        CHECK(sym.allocation.r_hat.isApproxToConstant(r / 6, 1e-6));
    }
}

TEST_CASE("full duplex beats half duplex with weak cross interference")
{
    for (std::uint64_t seed = 21; seed <= 30; ++seed) {
        const Scenario s = drop(4, seed, -std::numeric_limits<double>::infinity());
        for (double r : {2.0, 8.0}) {
            if (!(s.h_cci.array() < 1e-3 * std::min(s.h_up.minCoeff(), s.h_down.minCoeff())).all())
                continue;
            CHECK(hd_baseline_min_power(r, s).p_tot_min >= solve_min_total_power(r, s).p_tot_min);
        }
    }
    // by construction
    Eigen::VectorXd up(2);
    up << 50.0, 20.0;
    Eigen::VectorXd down(2);
    down << 30.0, 60.0;
    const Scenario s = make(up, down, Eigen::MatrixXd::Constant(2, 2, 0.01), 0.05, 0.25, 0.25);
    for (double r : {1.0, 5.0, 10.0})
        CHECK(hd_baseline_min_power(r, s).p_tot_min > solve_min_total_power(r, s).p_tot_min);
}

TEST_CASE("energy efficiency")
{
    Scenario s = one_pair(kInterior);
    s.bandwidth_hz = 1.0;
    s.omega = 1.0;
    s.p_fix_w = 0.1;
    CHECK(ee_at(3.0, s) == doctest::Approx(3.0 / (0.28762810177162434 + 0.1)).epsilon(1e-9));
    CHECK(ee_at(3.0, s) == doctest::Approx(compare_ee(3.0, kInterior, 1.0, 0.1).ee_fd).epsilon(1e-9));
    const double base = ee_at(3.0, s);
    s.p_fix_w = 0.2;
    CHECK(ee_at(3.0, s) < base);
    s.bandwidth_hz = 10e6;
    CHECK(energy_efficiency(2.0, 0.5, s) == doctest::Approx(10e6 * 2.0 / 0.7));
}
