// coolcav, cavity cooling of a trapped atom: rate formulas, detuning-plane
// sweeps, rate-equation dynamics, and Lindblad steady-state validation.
//
// Usage: coolcav <rates|sweep|evolve|oracle|limits> [--config FILE]
//        [--key=value ...]
// Exit codes: 0 ok, 2 config error, 3 singular point, 4 I/O error,
//             5 truncation overflow, 6 oracle failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coolcav/config.hpp"
#include "coolcav/dynamics.hpp"
#include "coolcav/format.hpp"
#include "coolcav/model.hpp"
#include "coolcav/oracle.hpp"
#include "coolcav/rates.hpp"
#include "coolcav/sweep.hpp"
#include "coolcav/version.hpp"

namespace {

using nlohmann::json;
using namespace coolcav;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSingular = 3;
constexpr int kExitIo = 4;
constexpr int kExitTruncation = 5;
constexpr int kExitOracle = 6;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

void emit_report(const OutputPaths& paths, const json& report) {
    const std::string text = report.dump(2) + "\n";
    if (paths.report.empty())
        std::cout << text;
    else
        write_text_file(paths.report, text);
}

json params_json(const SystemParams& p) {
    return {{"gamma", p.gamma},   {"kappa", p.kappa}, {"g", p.g},
            {"omega_p", p.omega_p}, {"eta", p.eta},   {"phi", p.phi},
            {"varphi", p.varphi}, {"d0", p.d0}};
}

json point_json(const DetuningPoint& d) {
    return {{"delta", d.delta},
            {"Delta", d.delta_cav},
            {"delta_c", d.delta_c()}};
}

json mean_m_json(const std::optional<double>& m) {
    if (m) return *m;
    return nullptr;
}

int threads_from_env() {
    const char* env = std::getenv("COOLCAV_THREADS");
    if (!env) return 0;
    const int n = std::atoi(env);
    return n > 0 ? n : 0;
}

int cmd_rates(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    const DetuningPoint d = cfg.detuning_point();
    const RateBreakdown b = rate_breakdown(p, d);
    const CoolingResult res = cooling_from_rates(p, to_rate_pair(b));
    const DressedStates ds = dressed_states(p, d);
    const double m_ref = res.mean_m ? *res.mean_m + 1.0 : 1.0;
    const RegimeFlags regime = check_regime(p, d, m_ref);

    std::vector<std::string> warnings;
    if (p.sin2_varphi() == 0.0)
        warnings.push_back("antinode: no cooling channel");
    if (p.cos2_phi() == 0.0)
        warnings.push_back(
            "cavity wave vector orthogonal to motion: no cooling channel");
    if (!regime.weak_drive_ok)
        warnings.push_back("outside weak-drive regime (epsilon >= 0.1)");
    if (!regime.lamb_dicke_ok)
        warnings.push_back("outside Lamb-Dicke regime (eta sqrt(m) >= 0.3)");
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    json report;
    report["params"] = params_json(p);
    report["point"] = point_json(d);
    report["cooperativity"] = cooperativity(p);
    report["epsilon"] = drive_epsilon(p, d);
    report["mean_cavity_photons"] = weak_drive_photon_number(p, d);
    report["dressed"] = {
        {"theta", ds.theta},
        {"omega_plus", {ds.omega_plus.real(), ds.omega_plus.imag()}},
        {"omega_minus", {ds.omega_minus.real(), ds.omega_minus.imag()}}};
    report["breakdown"] = {{"f0", b.f0},
                           {"f_minus", b.f_minus},
                           {"f_plus", b.f_plus},
                           {"rho_e", b.rho_e},
                           {"diffusion", b.diffusion},
                           {"a_gamma_plus", b.a_gamma_plus},
                           {"a_gamma_minus", b.a_gamma_minus},
                           {"a_kappa_plus", b.a_kappa_plus},
                           {"a_kappa_minus", b.a_kappa_minus},
                           {"a_plus", b.a_plus},
                           {"a_minus", b.a_minus}};
    report["result"] = {{"Gamma", res.gamma_cool},
                        {"steady", res.steady},
                        {"mean_m", mean_m_json(res.mean_m)}};
    report["regime"] = {{"weak_drive_ok", regime.weak_drive_ok},
                        {"lamb_dicke_ok", regime.lamb_dicke_ok}};
    report["warnings"] = warnings;
    emit_report(cfg.output_paths(), report);
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
    const SweepGrid grid = cfg.sweep_grid();
    const OutputPaths paths = cfg.output_paths();
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<SweepCell> cells = run_sweep(grid, threads_from_env());
    const double wall_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();

    const RegionSummary summary = classify_regions(grid, cells);
    write_text_file(paths.csv, sweep_csv(cells));
    write_text_file(paths.meta,
                    sweep_metadata_json(grid, wall_ms, summary.error_cells));

    if (const auto kind = cfg.sweep_curve()) {
        std::vector<double> samples(grid.delta_cav.n);
        for (int j = 0; j < grid.delta_cav.n; ++j)
            samples[j] = grid.delta_cav.value(j);
        write_text_file(paths.profile,
                        curve_profile_csv(curve_profile(grid.params, *kind,
                                                        samples)));
    }

    std::cout << "cells: " << cells.size() << " (" << summary.cooling_cells
              << " cooling, " << summary.heating_cells << " heating, "
              << summary.error_cells << " singular)\n";
    std::cout << "cooling regions: " << summary.cooling_regions.size()
              << ", heating regions: " << summary.heating_regions.size()
              << "\n";
    if (summary.has_min_mean_m)
        std::cout << "min mean_m = " << format_g17(summary.min_mean_m)
                  << " at (delta=" << format_g17(summary.min_mean_m_delta)
                  << ", Delta=" << format_g17(summary.min_mean_m_delta_cav)
                  << ")\n";
    if (summary.has_max_gamma)
        std::cout << "max Gamma = " << format_g17(summary.max_gamma)
                  << " at (delta=" << format_g17(summary.max_gamma_delta)
                  << ", Delta=" << format_g17(summary.max_gamma_delta_cav)
                  << ")\n";
    std::cout << "wrote " << paths.csv << " and " << paths.meta << " in "
              << wall_ms << " ms\n";
    return kExitOk;
}

int cmd_evolve(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    const DetuningPoint d = cfg.detuning_point();
    const EvolveOptions opts = cfg.evolve_options();
    const OutputPaths paths = cfg.output_paths();

    const RateBreakdown b = rate_breakdown(p, d);
    const RatePair rates = to_rate_pair(b);
    const CoolingResult res = cooling_from_rates(p, rates);

    const double mean0 = opts.initial_mean
                             ? *opts.initial_mean
                             : (opts.initial_level ? *opts.initial_level : 5.0);
    int truncation;
    if (opts.truncation) {
        truncation = *opts.truncation;
    } else {
        // deep enough that a thermal distribution at the largest mean the
        // run visits keeps its top-level population under the adequacy flag
        double reach = mean0;
        if (res.mean_m) reach = std::max(reach, *res.mean_m);
        truncation =
            std::max(50, static_cast<int>(std::ceil(16.0 * (reach + 1.0))));
    }
    if (truncation < 1 || truncation > 200000) {
        std::cerr << "error: evolve.truncation out of range\n";
        return kExitConfig;
    }

    PopulationState s0 =
        opts.initial_level
            ? PopulationState::single_level(*opts.initial_level, truncation)
            : PopulationState::thermal(mean0, truncation);

    double duration;
    if (opts.duration) {
        duration = *opts.duration;
    } else if (res.gamma_cool != 0.0) {
        duration = 10.0 / std::abs(res.gamma_cool);
    } else {
        const double drift = p.eta * p.eta * rates.a_plus;
        duration = drift > 0.0 ? truncation / (2.0 * drift) : 1.0;
    }

    std::vector<double> t_grid(opts.samples);
    for (int i = 0; i < opts.samples; ++i)
        t_grid[i] = duration * static_cast<double>(i + 1) /
                    static_cast<double>(opts.samples);

    const Trajectory traj =
        mean_phonon_trajectory(s0, p, rates, t_grid, 50000000L);
    write_text_file(paths.trajectory, trajectory_csv(traj));

    std::cout << "analytic Gamma = " << format_g17(res.gamma_cool)
              << (res.steady ? " (steady)" : " (no steady state)") << "\n";
    if (res.mean_m)
        std::cout << "analytic mean_m = " << format_g17(*res.mean_m) << "\n";

    if (res.steady && !traj.samples.empty() &&
        std::abs(mean0 - *res.mean_m) > 1e-12) {
        try {
            const double fitted =
                fitted_cooling_rate(traj, res.gamma_cool, *res.mean_m);
            std::cout << "fitted Gamma = " << format_g17(fitted)
                      << " (relative deviation "
                      << format_g17(fitted / res.gamma_cool - 1.0) << ")\n";
        } catch (const NonConvergence&) {
            std::cout << "fitted Gamma unavailable (trajectory too short)\n";
        }
    }

    std::cout << "wrote " << paths.trajectory << " (" << traj.samples.size()
              << " samples)\n";
    if (traj.stop == StopReason::truncation_overflow) {
        if (!res.steady) {
            std::cout << "verdict: heating; population reached the "
                         "truncation level\n";
            return kExitOk;
        }
        std::cerr << "error: truncation overflow; raise evolve.truncation "
                     "above "
                  << truncation << "\n";
        return kExitTruncation;
    }
    if (!res.steady) std::cout << "verdict: heating (Gamma <= 0)\n";
    return kExitOk;
}

int cmd_oracle(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    const DetuningPoint d = cfg.detuning_point();
    const OracleConfig oc = cfg.oracle_config();

    const CoolingResult analytic = cooling_result(p, d);
    if (!analytic.steady) {
        std::cerr << "error: oracle validation needs an analytically steady "
                     "point (Gamma > 0)\n";
        return kExitConfig;
    }

    const OracleSteadyState ss = oracle_steady_state(p, d, oc);
    const OracleRelaxation rx = oracle_relaxation_rate(p, d, oc);

    json report;
    report["params"] = params_json(p);
    report["point"] = point_json(d);
    report["oracle_config"] = {{"n_cavity", oc.n_cavity},
                               {"n_motion", oc.n_motion},
                               {"include_recoil", oc.include_recoil},
                               {"recoil_factor", oc.recoil_factor},
                               {"exact_cosine", oc.exact_cosine},
                               {"tol", oc.tol}};
    report["mean_m_analytic"] = mean_m_json(analytic.mean_m);
    report["mean_m_oracle"] = ss.mean_m;
    report["mean_m_relative_deviation"] =
        ss.mean_m / *analytic.mean_m - 1.0;
    report["gamma_analytic"] = analytic.gamma_cool;
    report["gamma_oracle"] = rx.rate;
    report["gamma_relative_deviation"] = rx.rate / analytic.gamma_cool - 1.0;
    report["steady_state"] = {
        {"residual", ss.residual},
        {"top_motion_population", ss.top_motion_population},
        {"top_cavity_population", ss.top_cavity_population},
        {"excited_population", ss.excited_population},
        {"mean_cavity_photons", ss.mean_cavity_photons},
        {"min_eigenvalue", ss.min_eigenvalue}};
    report["relaxation"] = {{"residual", rx.residual},
                            {"iterations", rx.iterations},
                            {"motional_weight", rx.motional_weight},
                            {"second_rate", rx.second_rate}};
    report["converged"] = true;
    emit_report(cfg.output_paths(), report);
    return kExitOk;
}

int cmd_limits(const RunConfig& cfg) {
    const SystemParams p = cfg.system_params();
    json report;
    report["params"] = params_json(p);
    report["cooperativity"] = cooperativity(p);

    try {
        const EitOptimum eit = optimum_eit(p);
        report["eit"] = {{"Delta_opt", eit.delta_cav_opt},
                         {"mean_m", eit.mean_m},
                         {"Gamma", eit.gamma_cool}};
    } catch (const DegenerateOptimum& e) {
        report["eit"] = {{"error", std::string("DegenerateOptimum: ") +
                                       e.what()}};
    }
    try {
        const InterferenceOptimum itf = optimum_interference(p);
        report["interference"] = {{"delta_opt", itf.delta_opt},
                                  {"Delta_opt", itf.delta_cav_opt},
                                  {"mean_m", itf.mean_m},
                                  {"Gamma", itf.gamma_cool}};
    } catch (const DegenerateOptimum& e) {
        report["interference"] = {
            {"error", std::string("DegenerateOptimum: ") + e.what()}};
    }
    try {
        const LimitSummary lim =
            limits_sideband_doppler(p, cfg.limits_delta_cav());
        report["sideband"] = {{"delta", -1.0},
                              {"mean_m", lim.sideband.mean_m},
                              {"Gamma", lim.sideband.gamma_cool},
                              {"regime_ok", lim.sideband.regime_ok}};
        report["doppler"] = {{"delta", -p.gamma / 2.0},
                             {"mean_m", lim.doppler.mean_m},
                             {"Gamma", lim.doppler.gamma_cool},
                             {"regime_ok", lim.doppler.regime_ok}};
    } catch (const NodeSingular& e) {
        report["sideband"] = {{"error", std::string("NodeSingular: ") +
                                            e.what()}};
        report["doppler"] = report["sideband"];
    }
    emit_report(cfg.output_paths(), report);
    return kExitOk;
}

void print_usage() {
    std::cout <<
        "coolcav " << kVersion << ": cavity cooling of a trapped atom\n"
        "\n"
        "usage: coolcav <command> [--config FILE] [--key=value ...]\n"
        "\n"
        "commands:\n"
        "  rates   rate breakdown and cooling result at one detuning point\n"
        "  sweep   Gamma and <m> over a (delta, Delta) grid -> CSV + JSON\n"
        "  evolve  integrate the phonon rate equation, fit the cooling rate\n"
        "  oracle  Lindblad steady-state validation of the analytic rates\n"
        "  limits  EIT/interference optima and sideband/Doppler limits\n"
        "\n"
        "Config files hold flat `key = value` lines with '#' comments; any\n"
        "key can be overridden on the command line with --key=value.\n"
        "COOLCAV_THREADS caps sweep parallelism (0 = auto).\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        print_usage();
        return args.empty() ? kExitConfig : kExitOk;
    }
    const std::string command = args[0];

    RunConfig cfg;
    try {
        std::vector<std::string> overrides;
        for (size_t i = 1; i < args.size(); ++i) {
            if (args[i] == "--config") {
                if (i + 1 >= args.size())
                    throw ConfigError("--config needs a file argument");
                cfg.kv = KeyValueConfig::from_file(args[++i]);
            } else if (args[i].rfind("--config=", 0) == 0) {
                cfg.kv = KeyValueConfig::from_file(args[i].substr(9));
            } else if (args[i] == "--help" || args[i] == "-h") {
                print_usage();
                return kExitOk;
            } else {
                overrides.push_back(args[i]);
            }
        }
        for (const auto& o : overrides) cfg.kv.apply_override(o);

        if (command == "rates") return cmd_rates(cfg);
        if (command == "sweep") return cmd_sweep(cfg);
        if (command == "evolve") return cmd_evolve(cfg);
        if (command == "oracle") return cmd_oracle(cfg);
        if (command == "limits") return cmd_limits(cfg);
        std::cerr << "error: unknown command '" << command << "'\n";
        print_usage();
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DimensionGuard& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PoleAtDetuning& e) {
        std::cerr << "singular point: " << e.what() << "\n";
        return kExitSingular;
    } catch (const ResonanceSingular& e) {
        std::cerr << "singular point: " << e.what() << "\n";
        return kExitSingular;
    } catch (const NodeSingular& e) {
        std::cerr << "singular point: " << e.what() << "\n";
        return kExitSingular;
    } catch (const DegenerateOptimum& e) {
        std::cerr << "singular point: " << e.what() << "\n";
        return kExitSingular;
    } catch (const TruncationOverflow& e) {
        std::cerr << "truncation overflow: " << e.what() << "\n";
        return kExitTruncation;
    } catch (const TruncationSuspect& e) {
        std::cerr << "oracle failure: " << e.what() << "\n";
        return kExitOracle;
    } catch (const NonConvergence& e) {
        std::cerr << "oracle failure: " << e.what() << "\n";
        return kExitOracle;
    } catch (const ModeIdentificationAmbiguous& e) {
        std::cerr << "oracle failure: " << e.what() << "\n";
        return kExitOracle;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
