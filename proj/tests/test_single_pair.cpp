#include <doctest.h>

#include <cmath>
#include <random>

#include "fdee/oracle.hpp"
#include "fdee/single_pair.hpp"
#include "fdee/verification.hpp"

using namespace fdee;

namespace {

const Gains kDownlinkFavoured{5.0, 10.0, 0.5, 0.2};
const Gains kInterior{20.0, 10.0, 0.5, 0.2};

} // namespace

TEST_CASE("sum rate of a split")
{
    CHECK(fd_sum_rate(Split{0.1, 0.1}, kInterior) == doctest::Approx(2.380272081118167).epsilon(1e-14));
    CHECK(fd_sum_rate(Split{0.0, 0.0}, kInterior) == 0.0);
    CHECK_THROWS_AS(fd_sum_rate(Split{-1.0, 0.0}, kInterior), DomainError);
}

TEST_CASE("full-duplex condition")
{
    CHECK(fd_necessary_condition(kInterior));
    CHECK(fd_necessary_condition(kDownlinkFavoured));
    // h_cci (1 + chi) = 6 > min(h_up, h_down) = 5
    const Gains bad{5.0, 10.0, 5.0, 0.2};
    CHECK_FALSE(fd_necessary_condition(bad));
    CHECK_THROWS_AS(min_power(1.0, bad), PreconditionViolated);
    CHECK_THROWS_AS(recover_split(1.0, bad), PreconditionViolated);
    // boundary equality does not satisfy the strict inequality
    CHECK_FALSE(fd_necessary_condition(Gains{6.0, 10.0, 5.0, 0.2}));
}

TEST_CASE("case thresholds")
{
    CHECK(downlink_threshold(kDownlinkFavoured) == doctest::Approx(2.590909090909091).epsilon(1e-14));
    CHECK(case_boundary_rate(kDownlinkFavoured) == doctest::Approx(1.3734583955274444).epsilon(1e-13));
    CHECK(downlink_threshold(kInterior) == doctest::Approx(0.5876288659793815).epsilon(1e-14));
    CHECK(1.0 / downlink_threshold(kInterior) == doctest::Approx(1.7017543859649122).epsilon(1e-14));

    CHECK(select_case(1.0, kDownlinkFavoured) == CaseLabel::DownlinkOnly);
    CHECK(select_case(2.0, kDownlinkFavoured) == CaseLabel::Interior);
    CHECK(select_case(0.5, kInterior) == CaseLabel::UplinkOnly);
    CHECK(select_case(3.0, kInterior) == CaseLabel::Interior);
    // exactly on the boundary the single-direction face wins the tie
    CHECK(select_case(case_boundary_rate(kDownlinkFavoured), kDownlinkFavoured) == CaseLabel::DownlinkOnly);
}

TEST_CASE("minimum power examples")
{
    const auto p1 = min_power(1.0, kDownlinkFavoured);
    CHECK(p1.label == CaseLabel::DownlinkOnly);
    CHECK(p1.value == doctest::Approx(0.1).epsilon(1e-14));

    const auto p3 = min_power(3.0, kInterior);
    CHECK(p3.label == CaseLabel::Interior);
    CHECK(p3.value == doctest::Approx(0.28762810177162434).epsilon(1e-13));

    CHECK(min_power(0.0, kInterior).value == 0.0);
    CHECK_THROWS_AS(min_power(-1.0, kInterior), DomainError);
    CHECK_THROWS_AS(min_power(std::nan(""), kInterior), DomainError);
}

TEST_CASE("uplink-only face")
{
    const double rate = 0.5;
    const double expected = (std::exp2(rate) - 1.0) * 1.2 / 20.0;
    CHECK(uplink_only_power(rate, kInterior) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(min_power(rate, kInterior).value == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("split recovery")
{
    const Split s = recover_split(3.0, kInterior);
    CHECK(s.p_up == doctest::Approx(0.16138321145874968).epsilon(1e-9));
    CHECK(s.total() == doctest::Approx(0.28762810177162434).epsilon(1e-9));
    CHECK(std::abs(fd_sum_rate(s, kInterior) - 3.0) < 1e-9);

    const Split d = recover_split(1.0, kDownlinkFavoured);
    CHECK(d.p_up == 0.0);
    CHECK(d.p_down == doctest::Approx(0.1).epsilon(1e-14));

    const Split u = recover_split(0.5, kInterior);
    CHECK(u.p_down == 0.0);
    CHECK(std::abs(fd_sum_rate(u, kInterior) - 0.5) < 1e-12);
}

TEST_CASE("split recovery postconditions on random instances")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rate(0.01, 10.0);
    for (int k = 0; k < 500; ++k) {
        const Gains g = verify::random_valid_gains(rng);
        const double r = rate(rng);
        const Split s = recover_split(r, g);
        CHECK(s.p_up >= 0.0);
        CHECK(s.p_down >= 0.0);
        CHECK(std::abs(s.total() - min_power(r, g).value) <= 1e-9 * min_power(r, g).value);
        CHECK(std::abs(fd_sum_rate(s, g) - r) <= 1e-9);
    }
}

TEST_CASE("half-duplex power and EE comparison")
{
    CHECK(hd_min_power(3.0, 20.0, 10.0) == doctest::Approx(0.35).epsilon(1e-14));
    const auto ee = compare_ee(3.0, kInterior, 1.0, 0.1);
    CHECK(ee.ee_fd == doctest::Approx(7.73937696025838).epsilon(1e-12));
    CHECK(ee.ee_hd == doctest::Approx(6.666666666666667).epsilon(1e-13));
}

TEST_CASE("EE comparison when the condition fails favours half duplex")
{
    std::mt19937_64 rng(12);
    for (int k = 0; k < 300; ++k) {
        const Gains g = verify::random_invalid_gains(rng);
        for (double r : {0.3, 1.0, 4.0, 9.0}) {
            const auto ee = compare_ee(r, g, 1.0, 0.1);
            CHECK(ee.ee_fd <= ee.ee_hd * (1 + 1e-12));
        }
    }
}

TEST_CASE("marginal power matches finite differences")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> rate(0.05, 9.0);
    for (int k = 0; k < 300; ++k) {
        const Gains g = verify::random_valid_gains(rng);
        const double r = rate(rng);
        if (std::abs(r - case_boundary_rate(g)) < 1e-3)
            continue;
        const auto f = [&](double x) { return min_power(x, g).value; };
        CHECK(oracle::finite_difference_check(f, r, marginal_power(r, g), 1e-5) < 1e-6);
    }
}

TEST_CASE("rate_at_marginal inverts marginal_power")
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> rate(0.01, 10.0);
    for (int k = 0; k < 300; ++k) {
        const Gains g = verify::random_valid_gains(rng);
        const double r = rate(rng);
        CHECK(rate_at_marginal(marginal_power(r, g), g) == doctest::Approx(r).epsilon(1e-9));
    }
    CHECK(rate_at_marginal(0.5 * marginal_power(0.0, kInterior), kInterior) == 0.0);
}

TEST_CASE("closed form agrees with the oracle")
{
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> rate(1e-3, 10.0);
    for (int k = 0; k < 200; ++k) {
        const Gains g = verify::random_valid_gains(rng);
        const double r = rate(rng);
        CHECK(min_power(r, g).value == doctest::Approx(oracle::min_power_single(r, g).value).epsilon(1e-8));
    }
}

TEST_CASE("minimum power is increasing and convex in rate")
{
    std::mt19937_64 rng(16);
    for (int k = 0; k < 100; ++k) {
        const Gains g = verify::random_valid_gains(rng);
        const auto report = oracle::convexity_probe([&](double r) { return min_power(r, g).value; }, 0.0, 12.0, 200);
        CHECK(report.min_second_difference >= -1e-8);
        CHECK(report.min_midpoint_slack >= -1e-8);
        double prev = -1;
        for (int t = 0; t <= 50; ++t) {
            const double p = min_power(0.2 * t, g).value;
            CHECK(p > prev);
            prev = p;
        }
    }
}

TEST_CASE("value and slope continuous at the case boundary")
{
    const double rb = case_boundary_rate(kDownlinkFavoured);
    CHECK(interior_power(rb, kDownlinkFavoured) ==
          doctest::Approx(downlink_only_power(rb, kDownlinkFavoured)).epsilon(1e-12));
    const auto f = [&](double x) { return min_power(x, kDownlinkFavoured).value; };
    const double left = oracle::one_sided_derivative(f, rb, 1e-5, false);
    const double right = oracle::one_sided_derivative(f, rb, 1e-5, true);
    CHECK(right == doctest::Approx(left).epsilon(1e-6));
    CHECK(marginal_power(rb, kDownlinkFavoured) == doctest::Approx(left).epsilon(1e-6));
}

TEST_CASE("templated on scalar")
{
    const GainTriple<long double> g{20.0L, 10.0L, 0.5L, 0.2L};
    CHECK(static_cast<double>(min_power(3.0L, g).value) == doctest::Approx(0.28762810177162434).epsilon(1e-15));
    const GainTriple<float> gf{20.0f, 10.0f, 0.5f, 0.2f};
    CHECK(min_power(3.0f, gf).value == doctest::Approx(0.2876281f).epsilon(1e-5));
}
