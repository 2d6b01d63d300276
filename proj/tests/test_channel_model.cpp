#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdee/channel_model.hpp"
#include "fdee/errors.hpp"

using namespace fdee;

TEST_CASE("path loss")
{
    CHECK(path_loss_db(0.1, PathLossModel::user_to_sbs()) == doctest::Approx(107.9).epsilon(1e-14));
    CHECK(path_loss_db(1.0, PathLossModel::user_to_sbs()) == 145.4);
    CHECK(path_loss_db(0.1, PathLossModel::user_to_user()) == doctest::Approx(135.78).epsilon(1e-14));
    CHECK_THROWS_AS(path_loss_db(0.0, PathLossModel::user_to_sbs()), DomainError);
    CHECK_THROWS_AS(path_loss_db(-1.0, PathLossModel::user_to_sbs()), DomainError);

    for (const auto& model : {PathLossModel::user_to_sbs(), PathLossModel::user_to_user()}) {
        double prev = -1e300;
        for (double d = 0.001; d < 2.0; d *= 1.3) {
            const double l = path_loss_db(d, model);
            CHECK(l > prev);
            prev = l;
        }
    }
}

TEST_CASE("noise power")
{
    CHECK(noise_power_w(-174.0, 1e7) == doctest::Approx(3.9810717055349693e-14).epsilon(1e-13));
    CHECK(noise_power_w(-174.0, 1.0) == doctest::Approx(3.981071705534986e-21).epsilon(1e-13));
    CHECK(noise_power_w(0.0, 1.0) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK_THROWS_AS(noise_power_w(-174.0, 0.0), DomainError);
}

TEST_CASE("normalized CNR")
{
    CHECK(normalized_cnr(107.9, 0.0, 3.981e-14) == doctest::Approx(407.38761551342196).epsilon(1e-12));
    CHECK(normalized_cnr(107.9, 10.0, 3.981e-14) == doctest::Approx(40.7387615513422).epsilon(1e-12));
    CHECK(normalized_cnr(0.0, 0.0, 1.0) == 1.0);
    CHECK_THROWS_AS(normalized_cnr(100.0, 0.0, 0.0), DomainError);
    CHECK(normalized_cnr(100.0, 0.0, 1e-13) > normalized_cnr(101.0, 0.0, 1e-13));
    CHECK(normalized_cnr(100.0, 0.0, 1e-13) > normalized_cnr(100.0, 0.0, 2e-13));
}

TEST_CASE("drops are deterministic and inside the cell")
{
    const UserDrop a = generate_drop(6, 6, 150.0, 42);
    const UserDrop b = generate_drop(6, 6, 150.0, 42);
    CHECK(a.uplink_positions == b.uplink_positions);
    CHECK(a.downlink_positions == b.downlink_positions);
    CHECK(a.uplink_positions.cols() == 6);
    CHECK(a.downlink_positions.cols() == 6);
    CHECK(a.uplink_positions.colwise().norm().maxCoeff() <= 150.0);
    CHECK(a.downlink_positions.colwise().norm().maxCoeff() <= 150.0);
    CHECK(generate_drop(6, 6, 150.0, 43).uplink_positions != a.uplink_positions);

    CHECK_THROWS_AS(generate_drop(0, 1, 150.0, 1), DomainError);
    CHECK_THROWS_AS(generate_drop(1, 0, 150.0, 1), DomainError);
    CHECK_THROWS_AS(generate_drop(1, 1, 0.0, 1), DomainError);
}

TEST_CASE("drops are nested in the user counts")
{
    const UserDrop small = generate_drop(3, 2, 150.0, 9);
    const UserDrop big = generate_drop(7, 5, 150.0, 9);
    CHECK(big.uplink_positions.leftCols(3) == small.uplink_positions);
    CHECK(big.downlink_positions.leftCols(2) == small.downlink_positions);

    ScenarioParams p;
    p.shadow_seed = 77;
    const Scenario s = build_scenario(small, p);
    const Scenario t = build_scenario(big, p);
    CHECK(t.h_up.head(3) == s.h_up);
    CHECK(t.h_down.head(2) == s.h_down);
    CHECK(t.h_cci.topLeftCorner(3, 2) == s.h_cci);
}

TEST_CASE("positions are area-uniform")
{
    const double radius = 150.0;
    const UserDrop d = generate_drop(1000, 1000, radius, 5);
    std::vector<double> u;
    for (const auto* pts : {&d.uplink_positions, &d.downlink_positions})
        for (Eigen::Index k = 0; k < pts->cols(); ++k)
            u.push_back(pts->col(k).squaredNorm() / (radius * radius));

    double mean = 0;
    for (double x : u)
        mean += x;
    mean /= static_cast<double>(u.size());
    CHECK(std::abs(mean - 0.5) <= 0.05 * 0.5);

    // Kolmogorov-Smirnov against U(0, 1); 1.63 / sqrt(n) is the 1% critical value
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double ks = 0;
    for (std::size_t k = 0; k < u.size(); ++k)
        ks = std::max({ks, (k + 1) / n - u[k], u[k] - k / n});
    CHECK(ks < 1.63 / std::sqrt(n));
}

TEST_CASE("scenario from a hand-placed drop")
{
    UserDrop drop;
    drop.uplink_positions = Eigen::Matrix2Xd(2, 2);
    drop.uplink_positions << 100.0, 0.0, 0.0, 50.0;
    drop.downlink_positions = drop.uplink_positions;
    drop.cell_radius = 150.0;

    ScenarioParams p;
    p.sbs_model.shadow_sigma_db = 0.0;
    p.user_model.shadow_sigma_db = 0.0;
    const Scenario s = build_scenario(drop, p);
    CHECK(s.h_up.isApprox(s.h_down, 1e-15));

    const double noise = noise_power_w(-174.0, 10e6);
    CHECK(s.h_up(0) == doctest::Approx(normalized_cnr(107.9, 0.0, noise)).epsilon(1e-12));
    CHECK(s.h_up(0) == doctest::Approx(407.3802778041122).epsilon(1e-12));
    // co-located users sit at the minimum distance of 10 m
    CHECK(s.h_cci(0, 0) == doctest::Approx(normalized_cnr(path_loss_db(0.01, p.user_model), 0.0, noise)).epsilon(1e-12));
    const double d01 = std::hypot(100.0, 50.0) / 1000.0;
    CHECK(s.h_cci(0, 1) == doctest::Approx(normalized_cnr(path_loss_db(d01, p.user_model), 0.0, noise)).epsilon(1e-12));
    CHECK(s.h_cci(0, 1) == s.h_cci(1, 0));
}

TEST_CASE("scenario construction is reproducible")
{
    ScenarioParams p;
    p.shadow_seed = 3;
    const UserDrop d = generate_drop(4, 4, 150.0, 8);
    const Scenario a = build_scenario(d, p);
    const Scenario b = build_scenario(d, p);
    CHECK(a.h_up == b.h_up);
    CHECK(a.h_down == b.h_down);
    CHECK(a.h_cci == b.h_cci);
    CHECK((a.h_up.array() > 0).all());
    CHECK((a.h_cci.array() > 0).all());
    p.shadow_seed = 4;
    CHECK(build_scenario(d, p).h_up != a.h_up);
}

TEST_CASE("fairness floors must fit in the frame")
{
    ScenarioParams p;
    p.gamma_min_up = 0.3;
    CHECK_THROWS_AS(build_scenario(generate_drop(4, 2, 150.0, 1), p), ConfigurationError);
    p.gamma_min_up = 0.25;
    CHECK_NOTHROW(build_scenario(generate_drop(4, 2, 150.0, 1), p));
    p.gamma_min_down = 0.6;
    CHECK_THROWS_AS(build_scenario(generate_drop(4, 2, 150.0, 1), p), ConfigurationError);
    CHECK(default_gamma_min(6, 6) == doctest::Approx(1.0 / 12.0));
    CHECK(default_gamma_min(2, 5) == doctest::Approx(0.1));
}
