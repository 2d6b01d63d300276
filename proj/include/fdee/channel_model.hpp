#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace fdee {

/// loss(d) = intercept_db + slope_db * log10(d / 1 km), plus log-normal shadowing.
struct PathLossModel {
    double intercept_db{0};
    double slope_db{1};
    double shadow_sigma_db{0};

    static PathLossModel user_to_sbs() { return {145.4, 37.5, 10.0}; }
    static PathLossModel user_to_user() { return {175.78, 40.0, 10.0}; }
};

/// One random realization of user positions around a base station at the
/// origin. Columns are (x, y) points in meters.
struct UserDrop {
    Eigen::Matrix2Xd uplink_positions;
    Eigen::Matrix2Xd downlink_positions;
    double cell_radius{0};
    std::uint64_t seed{0};
};

/// A complete multi-pair problem instance. CNRs are noise-normalized, so a
/// transmit power in watts times a CNR is an SNR.
struct Scenario {
    Eigen::VectorXd h_up;    ///< M uplink CNRs
    Eigen::VectorXd h_down;  ///< N downlink CNRs
    Eigen::MatrixXd h_cci;   ///< M x N, uplink user i -> downlink user j
    double chi{0};
    double bandwidth_hz{1};
    double omega{1};
    double p_fix_w{0};
    double gamma_min_up{0};
    double gamma_min_down{0};
    /// Pairs failing the full-duplex condition get zero time instead of
    /// rejecting the scenario.
    bool exclude_invalid_pairs{false};

    Eigen::Index num_up() const { return h_up.size(); }
    Eigen::Index num_down() const { return h_down.size(); }
};

/// Everything build_scenario needs besides the drop.
struct ScenarioParams {
    PathLossModel sbs_model = PathLossModel::user_to_sbs();
    PathLossModel user_model = PathLossModel::user_to_user();
    double noise_dbm_per_hz{-174.0};
    double bandwidth_hz{10e6};
    double chi{0};
    double omega{1};
    double p_fix_w{0.1};
    double gamma_min_up{0};
    double gamma_min_down{0};
    /// Link distances are clamped from below to keep the log-distance law
    /// inside its validity range.
    double min_distance_m{10.0};
    std::uint64_t shadow_seed{0};
    bool exclude_invalid_pairs{true};
};

double path_loss_db(double distance_km, const PathLossModel& model);

double noise_power_w(double density_dbm_per_hz, double bandwidth_hz);

double normalized_cnr(double loss_db, double shadow_db, double noise_w);

UserDrop generate_drop(Eigen::Index m, Eigen::Index n, double radius_m, std::uint64_t seed);

/// Throws ConfigurationError for infeasible fairness floors and DomainError
/// for non-physical values.
void validate(const Scenario& scenario);

Scenario build_scenario(const UserDrop& drop, const ScenarioParams& params);

/// 1 / (2 max(M, N))
double default_gamma_min(Eigen::Index m, Eigen::Index n);

} // namespace fdee
