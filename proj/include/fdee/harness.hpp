#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdee/channel_model.hpp"
#include "fdee/multi_user.hpp"
#include "fdee/tradeoff.hpp"

namespace fdee::harness {

enum class Preset { Curve, RsiSweep, UserSweep, SinglePair, Custom };
enum class SweepAxis { None, ChiDb, Users };
enum class Format { Csv, Json };

/// Simulation setup. Field names double as the JSON config keys.
struct ExperimentConfig {
    Preset preset{Preset::Custom};
    Eigen::Index m{6};  ///< uplink users
    Eigen::Index n{6};  ///< downlink users
    double radius_m{150.0};
    double bandwidth_hz{10e6};
    double noise_dbm_per_hz{-174.0};
    double omega{1.0};
    double p_fix_w{0.1};
    double min_distance_m{10.0};
    PathLossModel sbs_path_loss = PathLossModel::user_to_sbs();
    PathLossModel user_path_loss = PathLossModel::user_to_user();
    /// Residual self-interference relative to the noise floor; -inf is ideal
    /// cancellation.
    double chi_db{-std::numeric_limits<double>::infinity()};
    /// Unset means 1 / (2 max(M, N)) for the scenario at hand.
    std::optional<double> gamma_min_up;
    std::optional<double> gamma_min_down;
    SweepAxis sweep_axis{SweepAxis::None};
    std::vector<double> sweep_values;
    std::vector<double> se_grid{8.0};
    int n_drops{1};
    std::uint64_t base_seed{1};
    std::string output_path;
    Format format{Format::Csv};
    SolverConfig solver;
};

struct ResultRow {
    std::uint64_t drop_seed{0};
    double sweep_value{0};
    double se{0};
    double p_min_w{0};
    double ee{0};
    Duplex mode{Duplex::Full};
    std::string status{"ok"};  ///< "ok" or the solver error message

    bool ok() const { return status == "ok"; }
};

struct SummaryRow {
    double sweep_value{0};
    double se{0};
    Duplex mode{Duplex::Full};
    std::size_t count{0};     ///< rows that entered the statistics
    std::size_t excluded{0};  ///< error rows left out
    double ee_mean{0};
    double ee_median{0};
    double ee_std{0};
    double p_min_mean{0};
    double p_min_median{0};
    double p_min_std{0};
    bool flagged{false};      ///< every row of the group failed
};

ExperimentConfig preset_config(Preset preset);

Preset parse_preset(const std::string& name);
std::string to_string(Preset preset);
Format parse_format(const std::string& name);

/// Starts from the preset named in `j` (custom if absent) and overrides every
/// key present.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

void validate(const ExperimentConfig& config);

double chi_from_db(double chi_db);

/// Scenario for one drop; `m_override` replaces M = N for user sweeps.
Scenario make_scenario(const ExperimentConfig& config, std::uint64_t drop_seed, double chi_db,
                       std::optional<Eigen::Index> m_override = std::nullopt);

/// Runs every (drop, sweep value, SE, mode) combination. Drop d uses seed
/// base_seed + d. Rows come out ordered by drop, sweep index, SE index, then
/// FD before HD.
std::vector<ResultRow> run_preset(const ExperimentConfig& config);

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows);

std::string to_csv(const std::vector<ResultRow>& rows);
std::string to_csv(const std::vector<SummaryRow>& rows);
std::string to_json_text(const std::vector<ResultRow>& rows);
std::string to_json_text(const std::vector<SummaryRow>& rows);

std::vector<ResultRow> parse_rows_csv(const std::string& text);
std::vector<ResultRow> parse_rows_json(const std::string& text);

void emit(const std::vector<ResultRow>& rows, Format format, const std::string& path);
void emit(const std::vector<SummaryRow>& rows, Format format, const std::string& path);

/// RFC-4180 field: quoted only when it holds a comma, quote or line break.
std::string csv_quote(const std::string& field);

/// Writes to `path`, or stdout for "" and "-".
void write_text(const std::string& text, const std::string& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

} // namespace fdee::harness
