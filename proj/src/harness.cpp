#include "fdee/harness.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "fdee/errors.hpp"

namespace fdee::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const char* kRowHeader = "drop_seed,sweep_value,se,p_min_w,ee,mode,status";
const char* kSummaryHeader = "sweep_value,se,mode,count,excluded,ee_mean,ee_median,ee_std,"
                             "p_min_mean,p_min_median,p_min_std,flagged";

std::vector<double> se_range(double lo, double hi, double step)
{
    std::vector<double> out;
    const auto n = static_cast<int>(std::lround((hi - lo) / step));
    for (int k = 0; k <= n; ++k)
        out.push_back(lo + step * k);
    return out;
}

// JSON has no infinities; allow them spelled as strings.
double number_from(const nlohmann::json& v, const char* key)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "-inf" || s == "-infinity")
            return -kInf;
        if (s == "inf" || s == "infinity")
            return kInf;
    }
    throw ConfigurationError(std::string("config key '") + key + "' must be a number");
}

nlohmann::json number_to(double x)
{
    if (std::isinf(x))
        return x < 0 ? "-inf" : "inf";
    return x;
}

SweepAxis parse_axis(const std::string& s)
{
    if (s == "none")
        return SweepAxis::None;
    if (s == "chi_db")
        return SweepAxis::ChiDb;
    if (s == "users")
        return SweepAxis::Users;
    throw ConfigurationError("unknown sweep axis '" + s + "' (none, chi_db, users)");
}

const char* axis_name(SweepAxis a)
{
    switch (a) {
    case SweepAxis::ChiDb: return "chi_db";
    case SweepAxis::Users: return "users";
    default: return "none";
    }
}

PathLossModel model_from(const nlohmann::json& j, PathLossModel m)
{
    if (j.contains("intercept_db"))
        m.intercept_db = number_from(j["intercept_db"], "intercept_db");
    if (j.contains("slope_db"))
        m.slope_db = number_from(j["slope_db"], "slope_db");
    if (j.contains("shadow_sigma_db"))
        m.shadow_sigma_db = number_from(j["shadow_sigma_db"], "shadow_sigma_db");
    return m;
}

nlohmann::json model_to(const PathLossModel& m)
{
    return {{"intercept_db", m.intercept_db}, {"slope_db", m.slope_db}, {"shadow_sigma_db", m.shadow_sigma_db}};
}

// splitmix64 finalizer; decorrelates the shadowing stream from the position stream
std::uint64_t mix(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::string solve_status(const std::exception& e)
{
    std::string msg = e.what();
    return msg.empty() ? "error" : "error: " + msg;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted)
        throw std::runtime_error("csv: unterminated quoted field");
    if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

double parse_double(const std::string& s)
{
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return kInf;
    if (s == "-inf")
        return -kInf;
    double x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("csv: bad number '" + s + "'");
    return x;
}

Duplex parse_mode(const std::string& s)
{
    if (s == "FD")
        return Duplex::Full;
    if (s == "HD")
        return Duplex::Half;
    throw std::runtime_error("bad mode '" + s + "'");
}

struct Stats {
    double mean{0};
    double median{0};
    double std{0};
};

Stats stats_of(std::vector<double> v)
{
    Stats s;
    if (v.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan};
    }
    Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    s.mean = x.mean();
    s.std = std::sqrt((x.array() - s.mean).square().mean());
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    s.median = v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
    return s;
}

} // namespace

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

void write_text(const std::string& text, const std::string& path)
{
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    out << text;
    out.flush();
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed: " + std::strerror(errno));
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value < 0 ? "-inf" : "inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

double chi_from_db(double chi_db)
{
    if (std::isnan(chi_db) || chi_db == kInf)
        throw ConfigurationError("chi_db must be finite or -inf");
    return chi_db == -kInf ? 0.0 : std::pow(10.0, chi_db / 10.0);
}

Preset parse_preset(const std::string& name)
{
    if (name == "curve")
        return Preset::Curve;
    if (name == "rsi_sweep")
        return Preset::RsiSweep;
    if (name == "user_sweep")
        return Preset::UserSweep;
    if (name == "single_pair")
        return Preset::SinglePair;
    if (name == "custom")
        return Preset::Custom;
    throw ConfigurationError("unknown preset '" + name + "' (curve, rsi_sweep, user_sweep, single_pair, custom)");
}

std::string to_string(Preset preset)
{
    switch (preset) {
    case Preset::Curve: return "curve";
    case Preset::RsiSweep: return "rsi_sweep";
    case Preset::UserSweep: return "user_sweep";
    case Preset::SinglePair: return "single_pair";
    default: return "custom";
    }
}

Format parse_format(const std::string& name)
{
    if (name == "csv")
        return Format::Csv;
    if (name == "json")
        return Format::Json;
    throw ConfigurationError("unknown format '" + name + "' (csv, json)");
}

ExperimentConfig preset_config(Preset preset)
{
    ExperimentConfig c;
    c.preset = preset;
    const std::vector<double> chi_sweep{-kInf, -20.0, -10.0, 0.0};
    switch (preset) {
    case Preset::Curve:
        c.sweep_axis = SweepAxis::ChiDb;
        c.sweep_values = chi_sweep;
        c.se_grid = se_range(1.0, 20.0, 1.0);
        c.n_drops = 50;
        break;
    case Preset::RsiSweep:
        c.sweep_axis = SweepAxis::ChiDb;
        c.sweep_values = {-kInf, -20.0, -15.0, -10.0, -5.0, 0.0};
        c.se_grid = {8.0};
        c.n_drops = 50;
        break;
    case Preset::UserSweep:
        c.sweep_axis = SweepAxis::Users;
        c.sweep_values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
        c.se_grid = {8.0};
        // the HD decline in M is small next to the drop-to-drop spread
        c.n_drops = 1000;
        break;
    case Preset::SinglePair:
        c.m = 1;
        c.n = 1;
        c.sweep_axis = SweepAxis::ChiDb;
        c.sweep_values = chi_sweep;
        c.se_grid = se_range(0.5, 16.0, 0.5);
        c.n_drops = 50;
        break;
    case Preset::Custom:
        break;
    }
    return c;
}

ExperimentConfig config_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ConfigurationError("config must be a JSON object");
    ExperimentConfig c = preset_config(j.contains("preset") ? parse_preset(j["preset"].get<std::string>())
                                                           : Preset::Custom);
    try {
        const auto num = [&](const char* key, double& field) {
            if (j.contains(key))
                field = number_from(j[key], key);
        };
        if (j.contains("m"))
            c.m = j["m"].get<Eigen::Index>();
        if (j.contains("n"))
            c.n = j["n"].get<Eigen::Index>();
        num("radius_m", c.radius_m);
        num("bandwidth_hz", c.bandwidth_hz);
        num("noise_dbm_per_hz", c.noise_dbm_per_hz);
        num("omega", c.omega);
        num("p_fix_w", c.p_fix_w);
        num("min_distance_m", c.min_distance_m);
        num("chi_db", c.chi_db);
        if (j.contains("sbs_path_loss"))
            c.sbs_path_loss = model_from(j["sbs_path_loss"], c.sbs_path_loss);
        if (j.contains("user_path_loss"))
            c.user_path_loss = model_from(j["user_path_loss"], c.user_path_loss);
        for (auto [key, field] : {std::pair{"gamma_min_up", &c.gamma_min_up},
                                  std::pair{"gamma_min_down", &c.gamma_min_down}}) {
            if (!j.contains(key))
                continue;
            if (j[key].is_null())
                field->reset();
            else
                *field = number_from(j[key], key);
        }
        if (j.contains("sweep_axis"))
            c.sweep_axis = parse_axis(j["sweep_axis"].get<std::string>());
        if (j.contains("sweep_values")) {
            c.sweep_values.clear();
            for (const auto& v : j["sweep_values"])
                c.sweep_values.push_back(number_from(v, "sweep_values"));
        }
        if (j.contains("se_grid")) {
            c.se_grid.clear();
            for (const auto& v : j["se_grid"])
                c.se_grid.push_back(number_from(v, "se_grid"));
        }
        if (j.contains("n_drops"))
            c.n_drops = j["n_drops"].get<int>();
        if (j.contains("base_seed"))
            c.base_seed = j["base_seed"].get<std::uint64_t>();
        if (j.contains("output_path"))
            c.output_path = j["output_path"].get<std::string>();
        if (j.contains("format"))
            c.format = parse_format(j["format"].get<std::string>());
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            if (s.contains("max_iters"))
                c.solver.max_iters = s["max_iters"].get<int>();
            if (s.contains("tol_gap"))
                c.solver.tol_gap = s["tol_gap"].get<double>();
            if (s.contains("tol_feas"))
                c.solver.tol_feas = s["tol_feas"].get<double>();
            if (s.contains("gamma_floor"))
                c.solver.gamma_floor = s["gamma_floor"].get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigurationError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigurationError("cannot open config '" + path + "': " + std::strerror(errno));
    try {
        return config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigurationError("config '" + path + "': " + e.what());
    }
}

nlohmann::json to_json(const ExperimentConfig& c)
{
    nlohmann::json j;
    j["preset"] = to_string(c.preset);
    j["m"] = c.m;
    j["n"] = c.n;
    j["radius_m"] = c.radius_m;
    j["bandwidth_hz"] = c.bandwidth_hz;
    j["noise_dbm_per_hz"] = c.noise_dbm_per_hz;
    j["omega"] = c.omega;
    j["p_fix_w"] = c.p_fix_w;
    j["min_distance_m"] = c.min_distance_m;
    j["sbs_path_loss"] = model_to(c.sbs_path_loss);
    j["user_path_loss"] = model_to(c.user_path_loss);
    j["chi_db"] = number_to(c.chi_db);
    j["gamma_min_up"] = c.gamma_min_up ? nlohmann::json(*c.gamma_min_up) : nlohmann::json(nullptr);
    j["gamma_min_down"] = c.gamma_min_down ? nlohmann::json(*c.gamma_min_down) : nlohmann::json(nullptr);
    j["sweep_axis"] = axis_name(c.sweep_axis);
    j["sweep_values"] = nlohmann::json::array();
    for (double v : c.sweep_values)
        j["sweep_values"].push_back(number_to(v));
    j["se_grid"] = c.se_grid;
    j["n_drops"] = c.n_drops;
    j["base_seed"] = c.base_seed;
    j["output_path"] = c.output_path;
    j["format"] = c.format == Format::Csv ? "csv" : "json";
    j["solver"] = {{"max_iters", c.solver.max_iters},
                   {"tol_gap", c.solver.tol_gap},
                   {"tol_feas", c.solver.tol_feas},
                   {"gamma_floor", c.solver.gamma_floor}};
    return j;
}

void validate(const ExperimentConfig& c)
{
    if (c.n_drops < 1)
        throw ConfigurationError("n_drops must be at least 1");
    if (c.m < 1 || c.n < 1)
        throw ConfigurationError("need at least one uplink and one downlink user");
    if (!(c.radius_m > c.min_distance_m) || !(c.min_distance_m > 0))
        throw ConfigurationError("need 0 < min_distance_m < radius_m");
    if (!(c.bandwidth_hz > 0) || !(c.omega > 0) || !(c.p_fix_w >= 0))
        throw ConfigurationError("bandwidth and omega must be positive, p_fix non-negative");
    if (c.se_grid.empty())
        throw ConfigurationError("se_grid is empty");
    for (std::size_t k = 0; k < c.se_grid.size(); ++k) {
        if (!std::isfinite(c.se_grid[k]) || c.se_grid[k] < 0)
            throw ConfigurationError("se_grid values must be finite and non-negative");
        if (k > 0 && !(c.se_grid[k] > c.se_grid[k - 1]))
            throw ConfigurationError("se_grid must be strictly increasing");
    }
    for (std::size_t k = 0; k < c.sweep_values.size(); ++k) {
        const double v = c.sweep_values[k];
        // -inf is the one non-finite value: ideal cancellation on the chi axis
        const bool allowed_inf = c.sweep_axis == SweepAxis::ChiDb && v == -kInf;
        if (std::isnan(v) || (!std::isfinite(v) && !allowed_inf))
            throw ConfigurationError("sweep values must be finite");
        if (k > 0 && !(v > c.sweep_values[k - 1]))
            throw ConfigurationError("sweep values must be sorted and distinct");
    }
    if (c.sweep_axis == SweepAxis::Users)
        for (double v : c.sweep_values)
            if (v < 1 || v != std::floor(v))
                throw ConfigurationError("user sweep values must be positive integers");
    if (c.sweep_axis == SweepAxis::None && !c.sweep_values.empty())
        throw ConfigurationError("sweep_values given without a sweep_axis");
    chi_from_db(c.chi_db);
    for (const auto& g : {c.gamma_min_up, c.gamma_min_down})
        if (g && !(*g >= 0 && *g <= 1))
            throw ConfigurationError("gamma_min must lie in [0, 1]");
}

Scenario make_scenario(const ExperimentConfig& c, std::uint64_t drop_seed, double chi_db,
                       std::optional<Eigen::Index> m_override)
{
    const Eigen::Index m = m_override.value_or(c.m);
    const Eigen::Index n = m_override.value_or(c.n);
    ScenarioParams p;
    p.sbs_model = c.sbs_path_loss;
    p.user_model = c.user_path_loss;
    p.noise_dbm_per_hz = c.noise_dbm_per_hz;
    p.bandwidth_hz = c.bandwidth_hz;
    p.chi = chi_from_db(chi_db);
    p.omega = c.omega;
    p.p_fix_w = c.p_fix_w;
    p.gamma_min_up = c.gamma_min_up.value_or(default_gamma_min(m, n));
    p.gamma_min_down = c.gamma_min_down.value_or(default_gamma_min(m, n));
    p.min_distance_m = c.min_distance_m;
    p.shadow_seed = mix(drop_seed);
    p.exclude_invalid_pairs = true;
    return build_scenario(generate_drop(m, n, c.radius_m, drop_seed), p);
}

std::vector<ResultRow> run_preset(const ExperimentConfig& c)
{
    validate(c);
    const std::vector<double> sweep = c.sweep_values.empty() ? std::vector<double>{0.0} : c.sweep_values;
    std::vector<ResultRow> rows;
    rows.reserve(static_cast<std::size_t>(c.n_drops) * sweep.size() * c.se_grid.size() * 2);

    for (int d = 0; d < c.n_drops; ++d) {
        const std::uint64_t seed = c.base_seed + static_cast<std::uint64_t>(d);
        // HD does not see chi, so one HD pass serves the whole chi sweep
        std::vector<ResultRow> hd_cache;
        for (double value : sweep) {
            const double chi_db = c.sweep_axis == SweepAxis::ChiDb ? value : c.chi_db;
            std::optional<Eigen::Index> m;
            if (c.sweep_axis == SweepAxis::Users)
                m = static_cast<Eigen::Index>(value);

            std::optional<Scenario> scenario;
            std::string build_error;
            try {
                scenario = make_scenario(c, seed, chi_db, m);
            } catch (const std::exception& e) {
                build_error = solve_status(e);
            }

            const bool reuse_hd = c.sweep_axis == SweepAxis::ChiDb && !hd_cache.empty();
            for (std::size_t k = 0; k < c.se_grid.size(); ++k) {
                const double se = c.se_grid[k];
                for (Duplex mode : {Duplex::Full, Duplex::Half}) {
                    ResultRow row{seed, value, se, std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::quiet_NaN(), mode, "ok"};
                    if (mode == Duplex::Half && reuse_hd) {
                        row.p_min_w = hd_cache[k].p_min_w;
                        row.ee = hd_cache[k].ee;
                        row.status = hd_cache[k].status;
                    } else if (!scenario) {
                        row.status = build_error;
                    } else {
                        try {
                            row.p_min_w = solve_at(se, *scenario, mode, c.solver).p_tot_min;
                            row.ee = energy_efficiency(se, row.p_min_w, *scenario);
                        } catch (const std::exception& e) {
                            row.status = solve_status(e);
                        }
                    }
                    if (mode == Duplex::Half && !reuse_hd && c.sweep_axis == SweepAxis::ChiDb)
                        hd_cache.push_back(row);
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows)
{
    if (rows.empty())
        throw PreconditionViolated("aggregate needs at least one row");
    // keyed on (sweep_value, se, mode); map order gives sorted output
    using Key = std::tuple<double, double, int>;
    std::map<Key, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows)
        groups[{r.sweep_value, r.se, static_cast<int>(r.mode)}].push_back(&r);

    std::vector<SummaryRow> out;
    for (const auto& [key, members] : groups) {
        SummaryRow s;
        s.sweep_value = std::get<0>(key);
        s.se = std::get<1>(key);
        s.mode = static_cast<Duplex>(std::get<2>(key));
        std::vector<double> ee;
        std::vector<double> p;
        for (const ResultRow* r : members) {
            if (!r->ok()) {
                ++s.excluded;
                continue;
            }
            ee.push_back(r->ee);
            p.push_back(r->p_min_w);
        }
        s.count = ee.size();
        s.flagged = ee.empty();
        const Stats e = stats_of(ee);
        const Stats w = stats_of(p);
        s.ee_mean = e.mean;
        s.ee_median = e.median;
        s.ee_std = e.std;
        s.p_min_mean = w.mean;
        s.p_min_median = w.median;
        s.p_min_std = w.std;
        out.push_back(s);
    }
    return out;
}

std::string to_csv(const std::vector<ResultRow>& rows)
{
    std::string out = kRowHeader;
    out += "\r\n";
    for (const auto& r : rows) {
        out += std::to_string(r.drop_seed);
        for (double v : {r.sweep_value, r.se, r.p_min_w, r.ee}) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += to_string(r.mode);
        out += ',';
        out += csv_quote(r.status);
        out += "\r\n";
    }
    return out;
}

std::string to_csv(const std::vector<SummaryRow>& rows)
{
    std::string out = kSummaryHeader;
    out += "\r\n";
    for (const auto& s : rows) {
        out += format_double(s.sweep_value) + ',' + format_double(s.se) + ',' + to_string(s.mode) + ',' +
               std::to_string(s.count) + ',' + std::to_string(s.excluded);
        for (double v : {s.ee_mean, s.ee_median, s.ee_std, s.p_min_mean, s.p_min_median, s.p_min_std}) {
            out += ',';
            out += format_double(v);
        }
        out += s.flagged ? ",true\r\n" : ",false\r\n";
    }
    return out;
}

std::string to_json_text(const std::vector<ResultRow>& rows)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"drop_seed", r.drop_seed},
                       {"sweep_value", number_to(r.sweep_value)},
                       {"se", r.se},
                       {"p_min_w", r.p_min_w},
                       {"ee", r.ee},
                       {"mode", to_string(r.mode)},
                       {"status", r.status}});
    }
    return arr.dump(2) + "\n";
}

std::string to_json_text(const std::vector<SummaryRow>& rows)
{
    auto arr = nlohmann::json::array();
    for (const auto& s : rows) {
        arr.push_back({{"sweep_value", number_to(s.sweep_value)},
                       {"se", s.se},
                       {"mode", to_string(s.mode)},
                       {"count", s.count},
                       {"excluded", s.excluded},
                       {"ee_mean", s.ee_mean},
                       {"ee_median", s.ee_median},
                       {"ee_std", s.ee_std},
                       {"p_min_mean", s.p_min_mean},
                       {"p_min_median", s.p_min_median},
                       {"p_min_std", s.p_min_std},
                       {"flagged", s.flagged}});
    }
    return arr.dump(2) + "\n";
}

std::vector<ResultRow> parse_rows_csv(const std::string& text)
{
    const auto records = parse_csv(text);
    if (records.empty())
        throw std::runtime_error("csv: missing header");
    std::string header;
    for (std::size_t k = 0; k < records[0].size(); ++k)
        header += (k ? "," : "") + records[0][k];
    if (header != kRowHeader)
        throw std::runtime_error("csv: unexpected header '" + header + "'");
    std::vector<ResultRow> rows;
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& f = records[k];
        if (f.size() != 7)
            throw std::runtime_error("csv: record " + std::to_string(k) + " has " + std::to_string(f.size()) +
                                     " fields");
        ResultRow r;
        r.drop_seed = std::stoull(f[0]);
        r.sweep_value = parse_double(f[1]);
        r.se = parse_double(f[2]);
        r.p_min_w = parse_double(f[3]);
        r.ee = parse_double(f[4]);
        r.mode = parse_mode(f[5]);
        r.status = f[6];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> parse_rows_json(const std::string& text)
{
    const auto arr = nlohmann::json::parse(text);
    const auto num = [](const nlohmann::json& v) {
        return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : number_from(v, "row");
    };
    std::vector<ResultRow> rows;
    for (const auto& o : arr) {
        ResultRow r;
        r.drop_seed = o.at("drop_seed").get<std::uint64_t>();
        r.sweep_value = num(o.at("sweep_value"));
        r.se = num(o.at("se"));
        r.p_min_w = num(o.at("p_min_w"));
        r.ee = num(o.at("ee"));
        r.mode = parse_mode(o.at("mode").get<std::string>());
        r.status = o.at("status").get<std::string>();
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit(const std::vector<ResultRow>& rows, Format format, const std::string& path)
{
    write_text(format == Format::Csv ? to_csv(rows) : to_json_text(rows), path);
}

void emit(const std::vector<SummaryRow>& rows, Format format, const std::string& path)
{
    write_text(format == Format::Csv ? to_csv(rows) : to_json_text(rows), path);
}

} // namespace fdee::harness
