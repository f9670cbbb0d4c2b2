// catapult: batch front end for the reduced SGD dynamics, its closed-form
// phase diagnostics, and the Monte Carlo verification experiments.
//
// Exit codes: 0 ok, 2 input error, 3 infeasible config, 4 unknown experiment
// kind, 5 reproduction mismatch.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catapult/dataset.hpp"
#include "catapult/dynamics_linear.hpp"
#include "catapult/dynamics_relu.hpp"
#include "catapult/errors.hpp"
#include "catapult/fixtures.hpp"
#include "catapult/json_io.hpp"
#include "catapult/montecarlo.hpp"
#include "catapult/network_oracle.hpp"
#include "catapult/phase.hpp"
#include "catapult/version.hpp"

namespace {

using nlohmann::json;
using namespace catapult;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitUnknownKind = 4;
constexpr int kExitMismatch = 5;

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ManifestWriter {
    std::string command;
    json resolved_config = json::object();
    std::uint64_t master_seed = 0;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
    std::vector<std::string> argv_copy;

    void write(const std::string& path) const {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        json j{{"command", command},
               {"resolved_config", resolved_config},
               {"tool_version", kVersion},
               {"master_seed", master_seed},
               {"outputs", outputs},
               {"wall_time_s", wall},
               {"argv", argv_copy}};
        write_text_file(path, j.dump(2) + "\n");
    }
};

std::string default_manifest_path(const std::vector<std::string>& outputs) {
    if (!outputs.empty()) return outputs.front() + ".manifest.json";
    return "catapult_manifest.json";
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeOpts {
    std::string dataset_file;
    std::optional<double> lambda;
    std::string sweep_spec;  // lo:hi:n
    std::optional<double> with_n;
    double grid_step = 0.0;
    double spike_delta = 0.0;  // > 0: also report alpha(delta)
    bool spike_geometry = false;
    std::string out_csv;
    bool as_json = false;
};

int run_analyze(const AnalyzeOpts& opts, ManifestWriter& manifest) {
    const Dataset ds = dataset_from_file(opts.dataset_file);
    manifest.resolved_config["dataset"] = dataset_to_json(ds);

    if (!opts.sweep_spec.empty()) {
        double lo = 0, hi = 0;
        std::size_t n = 0;
        char colon1 = 0, colon2 = 0;
        std::istringstream spec(opts.sweep_spec);
        spec >> lo >> colon1 >> hi >> colon2 >> n;
        if (!spec || colon1 != ':' || colon2 != ':' || n < 2) {
            std::cerr << "error: --sweep expects lo:hi:n with n >= 2\n";
            return kExitInput;
        }
        manifest.resolved_config["sweep"] = {{"lo", lo}, {"hi", hi}, {"n", n}};
        const auto reports = sweep(ds, lo, hi, n);

        std::ostringstream csv;
        csv << "lambda,phase,G,vartheta";
        if (opts.with_n) csv << ",n_over_eta_pow";
        csv << "\n";
        for (const auto& rep : reports) {
            csv << format_g(rep.lambda) << ',' << phase_name(rep.phase) << ','
                << format_g(rep.log_drift) << ',' << format_g(rep.vartheta);
            if (opts.with_n) {
                const double ratio = *opts.with_n / ds.eta();
                const double value = std::isinf(rep.vartheta)
                                         ? 0.0
                                         : std::pow(ratio, -0.5 * rep.vartheta);
                csv << ',' << format_g(value);
            }
            csv << "\n";
        }
        if (opts.out_csv.empty()) {
            std::cout << csv.str();
        } else {
            write_text_file(opts.out_csv, csv.str());
            manifest.outputs.push_back(opts.out_csv);
        }
        return kExitOk;
    }

    if (!opts.lambda) {
        std::cerr << "error: analyze needs --lambda or --sweep\n";
        return kExitInput;
    }
    manifest.resolved_config["lambda"] = *opts.lambda;
    const auto rep = classify_phase(ds, *opts.lambda);
    json j = phase_report_to_json(rep);
    if (opts.with_n) {
        const double ratio = *opts.with_n / ds.eta();
        j["n_over_eta_pow"] =
            std::isinf(rep.vartheta) ? 0.0 : std::pow(ratio, -0.5 * rep.vartheta);
    }
    if (opts.spike_geometry && rep.phase == Phase::Inflationary) {
        const auto endpoint = inflationary_endpoint(ds, *opts.lambda, opts.grid_step);
        const auto collapse = collapse_threshold(ds, *opts.lambda, opts.grid_step);
        j["lambda_star"] = endpoint.lambda_star;
        j["lambda_star_literal_inf"] = endpoint.literal_inf;
        j["drift_zeros"] = endpoint.zeros;
        j["lambda_coll"] = collapse.lambda_coll;
        j["collapse_index_exists"] = collapse.index_exists;
        if (opts.with_n) {
            const auto [a_minus, a_plus] = ds.kernel_rate_bounds(*opts.lambda);
            (void)a_plus;
            if (a_minus > 0.0)
                j["M_plus"] = std::sqrt(*opts.with_n * (*opts.lambda - endpoint.lambda_star) /
                                        (ds.eta() * a_minus));
        }
    }
    if (opts.spike_delta > 0.0) {
        const auto tail = large_spike_exponent(ds, *opts.lambda, opts.spike_delta);
        j["alpha"] = std::isinf(tail.alpha) ? json(nullptr) : json(tail.alpha);
        j["p_3delta"] = tail.p_3delta;
    }
    if (opts.as_json || opts.out_csv.empty()) {
        std::cout << j.dump(2) << "\n";
    }
    if (!opts.out_csv.empty()) {
        write_text_file(opts.out_csv, j.dump(2) + "\n");
        manifest.outputs.push_back(opts.out_csv);
    }
    return kExitOk;
}

// --- simulate --------------------------------------------------------------

struct SimulateOpts {
    std::string dataset_file;
    double n = 1e8;
    double mu0 = 1.0;
    double lambda0 = 1.0;
    std::uint64_t seed = 0;
    long horizon = 100;
    std::optional<double> pred_threshold;
    std::optional<double> kernel_threshold;
    std::string record = "full";
    long stride = 1;
    std::string out_csv;
    std::string summary_json;
    bool relu = false;
    std::size_t width = 1024;
    double mu0_plus = 0.0, mu0_minus = 0.0, lambda0_plus = 0.0, lambda0_minus = 0.0;
};

int run_simulate(const SimulateOpts& opts, ManifestWriter& manifest) {
    const Dataset ds = dataset_from_file(opts.dataset_file);
    manifest.resolved_config = {{"dataset", dataset_to_json(ds)},
                                {"seed", opts.seed},
                                {"horizon", opts.horizon},
                                {"relu", opts.relu}};
    manifest.master_seed = opts.seed;

    if (opts.relu) {
        NetworkParams params;
        try {
            params = init_relu_wbiased(opts.width, opts.mu0_plus, opts.mu0_minus,
                                       opts.lambda0_plus, opts.lambda0_minus);
        } catch (const InfeasibleInitError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitInfeasible;
        }
        manifest.resolved_config["width"] = opts.width;
        manifest.resolved_config["mu0_pm"] = {opts.mu0_plus, opts.mu0_minus};
        manifest.resolved_config["lambda0_pm"] = {opts.lambda0_plus, opts.lambda0_minus};

        ReluSimConfig cfg;
        cfg.seed = opts.seed;
        cfg.horizon = opts.horizon;
        cfg.pred_threshold = opts.pred_threshold;
        cfg.stop_at_pred = opts.pred_threshold.has_value();
        const auto traj = simulate_relu(ds, std::move(params), cfg);

        std::ostringstream csv;
        csv << "t,i,mu_plus,mu_minus,lam_plus,lam_minus,delta_pred,delta_ker,flips\n";
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            const auto& st = traj.states[k];
            csv << st.t << ',';
            if (k == 0)
                csv << "-";
            else
                csv << traj.indices[k - 1];
            csv << ',' << format_g(st.mu_plus) << ',' << format_g(st.mu_minus) << ','
                << format_g(st.lam_plus) << ',' << format_g(st.lam_minus);
            if (k == 0)
                csv << ",0,0,0";
            else
                csv << ',' << format_g(traj.reports[k - 1].delta_pred) << ','
                    << format_g(traj.reports[k - 1].delta_ker) << ',' << traj.reports[k - 1].flipped;
            csv << "\n";
        }
        if (opts.out_csv.empty()) {
            std::cout << csv.str();
        } else {
            write_text_file(opts.out_csv, csv.str());
            manifest.outputs.push_back(opts.out_csv);
        }
        json summary{{"first_flip_time",
                      traj.first_flip_time ? json(*traj.first_flip_time) : json(nullptr)},
                     {"total_delta_ker", traj.total_delta_ker},
                     {"tau_pred_plus", traj.tau_pred_plus ? json(*traj.tau_pred_plus) : json(nullptr)},
                     {"tau_pred_minus",
                      traj.tau_pred_minus ? json(*traj.tau_pred_minus) : json(nullptr)},
                     {"status", run_status_name(traj.status)},
                     {"final", {{"mu_plus", traj.final_state.mu_plus},
                                {"mu_minus", traj.final_state.mu_minus},
                                {"lam_plus", traj.final_state.lam_plus},
                                {"lam_minus", traj.final_state.lam_minus}}}};
        if (!opts.summary_json.empty()) {
            write_text_file(opts.summary_json, summary.dump(2) + "\n");
            manifest.outputs.push_back(opts.summary_json);
        } else if (!opts.out_csv.empty()) {
            std::cout << summary.dump(2) << "\n";
        }
        return kExitOk;
    }

    SimConfig cfg;
    cfg.n = opts.n;
    cfg.mu0 = opts.mu0;
    cfg.lambda0 = opts.lambda0;
    cfg.seed = opts.seed;
    cfg.horizon = opts.horizon;
    cfg.pred_threshold = opts.pred_threshold;
    cfg.kernel_threshold = opts.kernel_threshold;
    cfg.stop_at_pred = opts.pred_threshold.has_value();
    cfg.stop_at_kernel = opts.kernel_threshold.has_value();
    if (opts.record == "full")
        cfg.record = RecordMode::Full;
    else if (opts.record == "stops")
        cfg.record = RecordMode::StoppingOnly;
    else if (opts.record == "strided")
        cfg.record = RecordMode::Strided;
    else {
        std::cerr << "error: --record must be full|stops|strided\n";
        return kExitInput;
    }
    cfg.stride = opts.stride;
    manifest.resolved_config["n"] = opts.n;
    manifest.resolved_config["mu0"] = opts.mu0;
    manifest.resolved_config["lambda0"] = opts.lambda0;

    const auto traj = simulate(ds, cfg);
    std::ostringstream csv;
    csv << "t,i,mu,lam\n";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const auto& st = traj.states[k];
        csv << st.t << ',';
        if (cfg.record == RecordMode::Full && k > 0 && k - 1 < traj.indices.size())
            csv << traj.indices[k - 1];
        else
            csv << '-';
        csv << ',' << format_g(st.mu) << ',' << format_g(st.lam) << "\n";
    }
    if (opts.out_csv.empty()) {
        std::cout << csv.str();
    } else {
        write_text_file(opts.out_csv, csv.str());
        manifest.outputs.push_back(opts.out_csv);
    }
    const json summary = stopping_summary_json(traj);
    if (!opts.summary_json.empty()) {
        write_text_file(opts.summary_json, summary.dump(2) + "\n");
        manifest.outputs.push_back(opts.summary_json);
    } else if (!opts.out_csv.empty()) {
        std::cout << summary.dump(2) << "\n";
    }
    return kExitOk;
}

// --- experiment ------------------------------------------------------------

McConfig mc_config_from_json(const json& spec) {
    McConfig cfg{dataset_from_json(spec.at("dataset")),
                 spec.value("n", 1e8),
                 spec.value("mu0", 1.0),
                 spec.value("lambda0", 1.0),
                 spec.value("replicates", 1000L),
                 spec.value("seed", 0ULL),
                 spec.value("horizon_multiplier", 50.0),
                 spec.value("horizon_override", 0L),
                 spec.value("workers", 0U)};
    return cfg;
}

int run_experiment(const std::string& spec_path, const std::string& out_path,
                   ManifestWriter& manifest) {
    std::ifstream in(spec_path);
    if (!in) {
        std::cerr << "error: cannot open " << spec_path << "\n";
        return kExitInput;
    }
    json spec;
    try {
        in >> spec;
    } catch (const json::parse_error& e) {
        std::cerr << "error: " << spec_path << ": " << e.what() << "\n";
        return kExitInput;
    }
    const std::string kind = spec.value("kind", "");
    manifest.resolved_config = spec;
    manifest.master_seed = spec.value("seed", 0ULL);

    json result{{"kind", kind}, {"config", spec}};
    if (kind == "lln_times") {
        const auto cfg = mc_config_from_json(spec);
        const auto stats =
            hitting_time_stats(cfg, spec.at("M").get<double>(), spec.value("delta", 0.5));
        result["hitting_time_stats"] = hitting_stats_to_json(stats);
    } else if (kind == "ldp_ladder") {
        const auto cfg = mc_config_from_json(spec);
        const auto ladder_spec = spec.at("ladder").get<std::vector<double>>();
        const auto rule = spec.contains("stop_epsilon") ? StopRule::KernelEpsilonStops
                                                        : StopRule::HorizonOnly;
        const auto ladder = hitting_ladder(cfg, ladder_spec, rule, spec.value("stop_epsilon", 0.0));
        json rungs = json::array();
        for (const auto& pt : ladder)
            rungs.push_back({{"M", pt.threshold}, {"estimate", estimate_to_json(pt.estimate)}});
        result["ladder"] = rungs;
        result["fit"] = fit_to_json(fit_exponent(ladder, cfg.mu0));
        if (spec.contains("ladder_csv")) {
            std::ostringstream csv;
            csv << "M,p_hat,ci_lo,ci_hi,successes,trials,truncated\n";
            for (const auto& pt : ladder) {
                const auto& est = pt.estimate;
                csv << format_g(pt.threshold) << ',' << format_g(est.p_hat) << ','
                    << format_g(est.ci_lo) << ',' << format_g(est.ci_hi) << ',' << est.successes
                    << ',' << est.trials << ',' << est.truncated << "\n";
            }
            const auto path = spec.at("ladder_csv").get<std::string>();
            write_text_file(path, csv.str());
            manifest.outputs.push_back(path);
        }
    } else if (kind == "slow_escape") {
        const auto cfg = mc_config_from_json(spec);
        const auto est =
            slow_escape_probe(cfg, spec.at("M").get<double>(), spec.at("epsilon").get<double>());
        result["estimate"] = estimate_to_json(est);
    } else if (kind == "post_spike") {
        const auto cfg = mc_config_from_json(spec);
        const double g = log_drift(cfg.ds, cfg.lambda0);
        if (!(g > 0.0)) {
            std::cerr << "error: post_spike needs an inflationary config\n";
            return kExitInfeasible;
        }
        const auto crit = critical_values(cfg.ds);
        const double m_default =
            std::sqrt(cfg.n / (cfg.ds.eta() * std::log(cfg.n / cfg.ds.eta())));
        const double M = spec.value("M", m_default);
        const double target = spec.value("lambda_target", crit.lambda_crit_mb);
        const auto divisors = spec.value("m_minus_divisors", std::vector<double>{2, 4, 8, 16});
        const auto prof = post_spike_profile(cfg, M, target, spec.value("k_window", 20), divisors);
        result["post_spike"] = post_spike_to_json(prof);
    } else if (kind == "relu_channels") {
        ReluChannelConfig cfg{dataset_from_json(spec.at("dataset")),
                              spec.value("width", std::size_t{1024}),
                              spec.at("mu0_pm").at(0).get<double>(),
                              spec.at("mu0_pm").at(1).get<double>(),
                              spec.at("lambda0_pm").at(0).get<double>(),
                              spec.at("lambda0_pm").at(1).get<double>(),
                              spec.value("replicates", 10000L),
                              spec.value("replicates_full", 50L),
                              spec.value("full_horizon", 200L),
                              spec.value("horizon_override", 0L),
                              spec.value("seed", 0ULL),
                              spec.value("horizon_multiplier", 50.0),
                              spec.value("workers", 0U)};
        const auto ladder = spec.at("ladder").get<std::vector<double>>();
        try {
            result["relu_channels"] = relu_channels_to_json(relu_channel_experiment(cfg, ladder));
        } catch (const InfeasibleInitError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitInfeasible;
        }
    } else if (kind == "closure") {
        const auto ds = dataset_from_json(spec.at("dataset"));
        const auto n = spec.value("n_width", std::size_t{64});
        const long T = spec.value("T", 100L);
        const long combos = spec.value("combos", 20L);
        const double mu0 = spec.value("mu0", 1e-3);
        const double lambda0 = spec.at("lambda0").get<double>();
        double worst = 0.0;
        json per = json::array();
        for (long c = 0; c < combos; ++c) {
            const auto style = c % 2 == 0 ? InitStyle::Constant : InitStyle::Alternating;
            const double dev = closure_check(ds, n, mu0, lambda0,
                                             spec.value("seed", 0ULL) + static_cast<std::uint64_t>(c),
                                             T, style);
            worst = std::max(worst, dev);
            per.push_back(dev);
        }
        result["closure"] = {{"max_deviation", worst}, {"per_combo", per}};
    } else {
        std::cerr << "error: unknown experiment kind '" << kind << "'\n";
        return kExitUnknownKind;
    }

    const std::string dump = result.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << dump;
    } else {
        write_text_file(out_path, dump);
        manifest.outputs.push_back(out_path);
    }
    return kExitOk;
}

// --- reproduce ---------------------------------------------------------------

int run_reproduce(const std::string& id, ManifestWriter& manifest) {
    std::vector<std::string> ids;
    if (id == "all")
        ids = fixtures::reproduce_ids();
    else
        ids.push_back(id);
    bool all_pass = true;
    for (const auto& one : ids) {
        std::vector<fixtures::ComparisonRow> rows;
        try {
            rows = fixtures::reproduce(one);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitInput;
        }
        std::printf("%s\n%-24s %14s %20s %12s %6s\n", one.c_str(), "quantity", "published",
                    "computed", "|diff|", "ok");
        for (const auto& row : rows) {
            all_pass &= row.pass;
            std::printf("%-24s %14.6g %20.12g %12.3g %6s\n", row.quantity.c_str(), row.reference,
                        row.computed, std::fabs(row.computed - row.reference),
                        row.pass ? "pass" : "FAIL");
        }
        std::printf("\n");
    }
    manifest.resolved_config["ids"] = ids;
    return all_pass ? kExitOk : kExitMismatch;
}

int dispatch(int argc, char** argv);

int run_replay(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        std::cerr << "error: cannot open " << manifest_path << "\n";
        return kExitInput;
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    const auto argv_stored = j.value("argv", std::vector<std::string>{});
    if (argv_stored.empty()) {
        std::cerr << "error: manifest has no argv\n";
        return kExitInput;
    }
    std::vector<std::string> args = argv_stored;
    std::vector<char*> argv;
    argv.reserve(args.size());
    for (auto& a : args) argv.push_back(a.data());
    return dispatch(static_cast<int>(argv.size()), argv.data());
}

int dispatch(int argc, char** argv) {
    CLI::App app{"catapult-phase SGD dynamics toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();  // --manifest may follow the subcommand arguments

    ManifestWriter manifest;
    for (int k = 0; k < argc; ++k) manifest.argv_copy.emplace_back(argv[k]);
    std::string manifest_path;
    app.add_option("--manifest", manifest_path, "where to write the run manifest");

    AnalyzeOpts an;
    auto* analyze = app.add_subcommand("analyze", "closed-form phase diagnostics");
    analyze->add_option("dataset", an.dataset_file, "dataset JSON file")->required();
    analyze->add_option("--lambda", an.lambda, "curvature to classify");
    analyze->add_option("--sweep", an.sweep_spec, "lo:hi:n curvature grid -> CSV");
    analyze->add_option("--with-n", an.with_n, "width n, adds the (n/eta)^(-vartheta/2) column");
    analyze->add_option("--grid-step", an.grid_step, "scan resolution for lambda_star/lambda_coll");
    analyze->add_option("--delta", an.spike_delta, "margin for the large-spike exponent alpha");
    analyze->add_flag("--spike-geometry", an.spike_geometry,
                      "report lambda_star / lambda_coll when inflationary");
    analyze->add_option("--out", an.out_csv, "output file (CSV for sweeps, JSON otherwise)");
    analyze->add_flag("--json", an.as_json, "always print JSON to stdout");

    SimulateOpts sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "one trajectory with stopping summary");
    simulate_cmd->add_option("dataset", sim.dataset_file)->required();
    simulate_cmd->add_option("--n", sim.n, "width (reduced dynamics scale)");
    simulate_cmd->add_option("--mu0", sim.mu0);
    simulate_cmd->add_option("--lambda0", sim.lambda0);
    simulate_cmd->add_option("--seed", sim.seed, "RNG seed (default 0, never wall clock)");
    simulate_cmd->add_option("--horizon", sim.horizon);
    simulate_cmd->add_option("--M", sim.pred_threshold, "prediction stop threshold");
    simulate_cmd->add_option("--lambda-stop", sim.kernel_threshold, "kernel stop threshold");
    simulate_cmd->add_option("--record", sim.record, "full|stops|strided");
    simulate_cmd->add_option("--stride", sim.stride);
    simulate_cmd->add_option("--out", sim.out_csv, "trajectory CSV path");
    simulate_cmd->add_option("--summary", sim.summary_json, "stopping summary JSON path");
    simulate_cmd->add_flag("--relu", sim.relu, "full-parameter ReLU run with w-biased init");
    simulate_cmd->add_option("--width", sim.width, "neuron count for --relu");
    simulate_cmd->add_option("--mu0p", sim.mu0_plus);
    simulate_cmd->add_option("--mu0m", sim.mu0_minus);
    simulate_cmd->add_option("--lam0p", sim.lambda0_plus);
    simulate_cmd->add_option("--lam0m", sim.lambda0_minus);

    std::string experiment_file, experiment_out;
    auto* experiment = app.add_subcommand("experiment", "named Monte Carlo experiment from JSON");
    experiment->add_option("spec", experiment_file, "experiment JSON")->required();
    experiment->add_option("--out", experiment_out, "result JSON path");

    std::string reproduce_id;
    auto* reproduce =
        app.add_subcommand("reproduce", "compare computed values against the published examples");
    reproduce->add_option("id", reproduce_id, "ex121|ex122|ex123|ex124|ex125|spike_collapse|all")
        ->required();

    std::string replay_path;
    auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay->add_option("manifest", replay_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    int rc = kExitOk;
    try {
        if (analyze->parsed()) {
            manifest.command = "analyze";
            rc = run_analyze(an, manifest);
        } else if (simulate_cmd->parsed()) {
            manifest.command = "simulate";
            rc = run_simulate(sim, manifest);
        } else if (experiment->parsed()) {
            manifest.command = "experiment";
            rc = run_experiment(experiment_file, experiment_out, manifest);
        } else if (reproduce->parsed()) {
            manifest.command = "reproduce";
            rc = run_reproduce(reproduce_id, manifest);
        } else if (replay->parsed()) {
            return run_replay(replay_path);
        }
    } catch (const JsonSchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InfeasibleInitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }

    if (rc == kExitOk || rc == kExitMismatch) {
        manifest.write(manifest_path.empty() ? default_manifest_path(manifest.outputs)
                                             : manifest_path);
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
