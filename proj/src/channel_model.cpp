#include "fdee/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fdee/errors.hpp"

namespace fdee {

double path_loss_db(double distance_km, const PathLossModel& model)
{
    if (!(distance_km > 0))
        throw DomainError("path loss needs a positive distance, got " + std::to_string(distance_km));
    return model.intercept_db + model.slope_db * std::log10(distance_km);
}

double noise_power_w(double density_dbm_per_hz, double bandwidth_hz)
{
    if (!(bandwidth_hz > 0))
        throw DomainError("bandwidth must be positive");
    const double dbm = density_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double normalized_cnr(double loss_db, double shadow_db, double noise_w)
{
    if (!(noise_w > 0))
        throw DomainError("noise power must be positive");
    return std::pow(10.0, -(loss_db + shadow_db) / 10.0) / noise_w;
}

namespace {

// Separate streams per user population (and per CCI row) keep drops nested:
// the first M users of an (M+1)-user drop coincide with the M-user drop.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t id)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
    return std::mt19937_64(seq);
}

Eigen::Matrix2Xd sample_disk(Eigen::Index count, double radius, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::Matrix2Xd points(2, count);
    for (Eigen::Index k = 0; k < count; ++k) {
        // area-uniform: radius ~ R sqrt(u)
        const double r = radius * std::sqrt(unit(rng));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        points(0, k) = r * std::cos(theta);
        points(1, k) = r * std::sin(theta);
    }
    return points;
}

} // namespace

UserDrop generate_drop(Eigen::Index m, Eigen::Index n, double radius_m, std::uint64_t seed)
{
    if (m < 1 || n < 1)
        throw DomainError("a drop needs at least one uplink and one downlink user");
    if (!(radius_m > 0))
        throw DomainError("cell radius must be positive");
    auto up_rng = stream(seed, 0);
    auto down_rng = stream(seed, 1);
    UserDrop drop;
    drop.uplink_positions = sample_disk(m, radius_m, up_rng);
    drop.downlink_positions = sample_disk(n, radius_m, down_rng);
    drop.cell_radius = radius_m;
    drop.seed = seed;
    return drop;
}

double default_gamma_min(Eigen::Index m, Eigen::Index n)
{
    return 1.0 / (2.0 * static_cast<double>(std::max(m, n)));
}

void validate(const Scenario& s)
{
    const Eigen::Index m = s.num_up();
    const Eigen::Index n = s.num_down();
    if (m < 1 || n < 1)
        throw DomainError("scenario needs at least one uplink and one downlink user");
    if (s.h_cci.rows() != m || s.h_cci.cols() != n)
        throw DomainError("h_cci must be M x N");
    if (!(s.h_up.array() > 0).all() || !(s.h_down.array() > 0).all() || !(s.h_cci.array() >= 0).all() ||
        !s.h_up.allFinite() || !s.h_down.allFinite() || !s.h_cci.allFinite())
        throw DomainError("CNRs must be finite, positive (cross links non-negative)");
    if (!(s.chi >= 0) || !(s.omega > 0) || !(s.p_fix_w >= 0) || !(s.bandwidth_hz > 0))
        throw DomainError("require chi >= 0, omega > 0, p_fix >= 0, bandwidth > 0");
    if (!(s.gamma_min_up >= 0) || !(s.gamma_min_down >= 0))
        throw ConfigurationError("fairness floors must be non-negative");
    if (static_cast<double>(m) * s.gamma_min_up > 1.0 + 1e-12)
        throw ConfigurationError("uplink fairness floors exceed the frame: M * gamma_min_up = " +
                                 std::to_string(static_cast<double>(m) * s.gamma_min_up));
    if (static_cast<double>(n) * s.gamma_min_down > 1.0 + 1e-12)
        throw ConfigurationError("downlink fairness floors exceed the frame: N * gamma_min_down = " +
                                 std::to_string(static_cast<double>(n) * s.gamma_min_down));
}

Scenario build_scenario(const UserDrop& drop, const ScenarioParams& p)
{
    const Eigen::Index m = drop.uplink_positions.cols();
    const Eigen::Index n = drop.downlink_positions.cols();
    const double noise_w = noise_power_w(p.noise_dbm_per_hz, p.bandwidth_hz);

    const auto cnr = [&](double distance_m, const PathLossModel& model, std::mt19937_64& rng) {
        const double d_km = std::max(distance_m, p.min_distance_m) / 1000.0;
        // fresh distribution per draw so no cached variate leaks across links
        const double shadow = model.shadow_sigma_db * std::normal_distribution<double>(0.0, 1.0)(rng);
        return normalized_cnr(path_loss_db(d_km, model), shadow, noise_w);
    };

    Scenario s;
    s.h_up.resize(m);
    s.h_down.resize(n);
    s.h_cci.resize(m, n);
    auto up_rng = stream(p.shadow_seed, 0);
    for (Eigen::Index i = 0; i < m; ++i)
        s.h_up(i) = cnr(drop.uplink_positions.col(i).norm(), p.sbs_model, up_rng);
    auto down_rng = stream(p.shadow_seed, 1);
    for (Eigen::Index j = 0; j < n; ++j)
        s.h_down(j) = cnr(drop.downlink_positions.col(j).norm(), p.sbs_model, down_rng);
    for (Eigen::Index i = 0; i < m; ++i) {
        auto row_rng = stream(p.shadow_seed, 2 + static_cast<std::uint64_t>(i));
        for (Eigen::Index j = 0; j < n; ++j)
            s.h_cci(i, j) = cnr((drop.uplink_positions.col(i) - drop.downlink_positions.col(j)).norm(),
                                p.user_model, row_rng);
    }

    s.chi = p.chi;
    s.bandwidth_hz = p.bandwidth_hz;
    s.omega = p.omega;
    s.p_fix_w = p.p_fix_w;
    s.gamma_min_up = p.gamma_min_up;
    s.gamma_min_down = p.gamma_min_down;
    s.exclude_invalid_pairs = p.exclude_invalid_pairs;
    validate(s);
    return s;
}

} // namespace fdee
