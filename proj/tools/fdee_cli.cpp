#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdee/harness.hpp"
#include "fdee/verification.hpp"

using namespace fdee;
namespace h = fdee::harness;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_drops)
{
    cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--preset", o.preset, "curve, rsi_sweep, user_sweep, single_pair or custom");
    cmd->add_option("--seed", o.seed, "base seed (drop d uses seed + d)");
    if (with_drops)
        cmd->add_option("--drops", o.drops, "number of drops")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output path, '-' or empty for stdout");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

h::ExperimentConfig resolve(const CommonOptions& o, h::Preset fallback)
{
    nlohmann::json j = nlohmann::json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigurationError("config '" + o.config_path + "': " + e.what());
        }
    }
    if (!o.preset.empty())
        j["preset"] = o.preset;
    else if (!j.contains("preset") && o.config_path.empty())
        j["preset"] = h::to_string(fallback);
    h::ExperimentConfig c = h::config_from_json(j);
    if (o.seed)
        c.base_seed = *o.seed;
    if (o.drops)
        c.n_drops = *o.drops;
    if (!o.out.empty())
        c.output_path = o.out;
    if (!o.format.empty())
        c.format = h::parse_format(o.format);
    h::validate(c);
    return c;
}

int cmd_run(const CommonOptions& o, const std::string& summary_path)
{
    const h::ExperimentConfig c = resolve(o, h::Preset::Curve);
    const auto rows = h::run_preset(c);
    h::emit(rows, c.format, c.output_path);
    if (!summary_path.empty())
        h::emit(h::aggregate(rows), c.format, summary_path);
    return 0;
}

int cmd_curve(const CommonOptions& o)
{
    h::ExperimentConfig c = resolve(o, h::Preset::Curve);
    c.n_drops = 1;
    h::emit(h::run_preset(c), c.format, c.output_path);
    return 0;
}

int cmd_maxee(const CommonOptions& o, double lo, double hi, double tol)
{
    h::ExperimentConfig c = resolve(o, h::Preset::Curve);
    const std::vector<double> sweep = c.sweep_values.empty() ? std::vector<double>{0.0} : c.sweep_values;
    auto out = nlohmann::json::array();
    std::string csv = "drop_seed,sweep_value,mode,se,ee,p_min_w,evaluations,status\r\n";
    for (int d = 0; d < c.n_drops; ++d) {
        const std::uint64_t seed = c.base_seed + static_cast<std::uint64_t>(d);
        for (double v : sweep) {
            const double chi_db = c.sweep_axis == h::SweepAxis::ChiDb ? v : c.chi_db;
            std::optional<Eigen::Index> m;
            if (c.sweep_axis == h::SweepAxis::Users)
                m = static_cast<Eigen::Index>(v);
            for (Duplex mode : {Duplex::Full, Duplex::Half}) {
                EeOptimum opt;
                std::string status = "ok";
                try {
                    opt = max_ee(h::make_scenario(c, seed, chi_db, m), lo, hi, tol, c.solver, mode);
                } catch (const std::exception& e) {
                    status = std::string("error: ") + e.what();
                }
                out.push_back({{"drop_seed", seed},
                               {"sweep_value", std::isinf(v) ? nlohmann::json("-inf") : nlohmann::json(v)},
                               {"mode", to_string(mode)},
                               {"se", opt.se},
                               {"ee", opt.ee},
                               {"p_min_w", opt.p_min},
                               {"evaluations", opt.evaluations},
                               {"status", status}});
                csv += std::to_string(seed) + ',' + h::format_double(v) + ',' + to_string(mode) + ',' +
                       h::format_double(opt.se) + ',' + h::format_double(opt.ee) + ',' +
                       h::format_double(opt.p_min) + ',' + std::to_string(opt.evaluations) + ',' +
                       h::csv_quote(status) + "\r\n";
            }
        }
    }
    h::write_text(c.format == h::Format::Json ? out.dump(2) + "\n" : csv, c.output_path);
    return 0;
}

int cmd_verify(std::uint64_t seed, double scale)
{
    bool ok = true;
    for (const auto& r : verify::run_all(seed, scale)) {
        std::printf("%s\n", verify::format_line(r).c_str());
        std::fflush(stdout);
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy-efficiency / spectral-efficiency tradeoff of full-duplex small cells"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    std::string summary_path;
    auto* run = app.add_subcommand("run", "run an experiment preset over many drops");
    add_common(run, run_opts, true);
    run->add_option("--summary", summary_path, "also write aggregated statistics here");

    CommonOptions curve_opts;
    auto* curve = app.add_subcommand("curve", "EE-SE curves for a single drop");
    add_common(curve, curve_opts, false);

    CommonOptions maxee_opts;
    double lo = 0.0;
    double hi = 24.0;
    double tol = 1e-4;
    auto* maxee = app.add_subcommand("maxee", "EE-maximizing SE per drop and sweep value");
    add_common(maxee, maxee_opts, true);
    maxee->add_option("--lo", lo, "lower end of the SE search interval");
    maxee->add_option("--hi", hi, "upper end of the SE search interval");
    maxee->add_option("--tol", tol, "SE tolerance, bit/s/Hz");

    std::uint64_t verify_seed = 1;
    double scale = 1.0;
    auto* ver = app.add_subcommand("verify", "randomized checks against brute-force oracles");
    ver->add_option("--seed", verify_seed, "seed for the random instances");
    ver->add_option("--scale", scale, "multiplier on instance counts")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_run(run_opts, summary_path);
        if (*curve)
            return cmd_curve(curve_opts);
        if (*maxee) {
            if (!maxee_opts.drops)
                maxee_opts.drops = 1;
            return cmd_maxee(maxee_opts, lo, hi, tol);
        }
        return cmd_verify(verify_seed, scale);
    } catch (const std::exception& e) {
        std::cerr << "fdee: " << e.what() << '\n';
        return 2;
    }
}
