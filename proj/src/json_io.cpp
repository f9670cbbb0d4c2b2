#include "catapult/json_io.hpp"

#include <cmath>
#include <fstream>

#include "catapult/errors.hpp"

namespace catapult {

using nlohmann::json;

Dataset dataset_from_json(const json& j) {
    if (!j.is_object()) throw JsonSchemaError("dataset must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "eta" && key != "points") throw JsonSchemaError("unknown dataset field '" + key + "'");
    if (!j.contains("eta") || !j.contains("points"))
        throw JsonSchemaError("dataset needs fields 'eta' and 'points'");
    if (!j["eta"].is_number()) throw JsonSchemaError("'eta' must be a number");
    if (!j["points"].is_array()) throw JsonSchemaError("'points' must be an array");

    std::vector<DataPoint> pts;
    for (const auto& entry : j["points"]) {
        if (!entry.is_object()) throw JsonSchemaError("each point must be an object");
        for (const auto& [key, _] : entry.items())
            if (key != "s" && key != "p") throw JsonSchemaError("unknown point field '" + key + "'");
        if (!entry.contains("s") || !entry.contains("p") || !entry["s"].is_number() ||
            !entry["p"].is_number())
            throw JsonSchemaError("each point needs numeric fields 's' and 'p'");
        pts.push_back({entry["s"].get<double>(), entry["p"].get<double>()});
    }
    return Dataset::validate(std::move(pts), j["eta"].get<double>());
}

Dataset dataset_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JsonSchemaError("cannot open dataset file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw JsonSchemaError(path + ": " + e.what());
    }
    return dataset_from_json(j);
}

json dataset_to_json(const Dataset& ds) {
    json pts = json::array();
    for (const auto& pt : ds.points()) pts.push_back({{"s", pt.s}, {"p", pt.p}});
    return {{"eta", ds.eta()}, {"points", pts}};
}

namespace {
json finite_or_null(double v) {
    if (std::isinf(v) || std::isnan(v)) return nullptr;
    return v;
}
}  // namespace

json phase_report_to_json(const PhaseReport& rep) {
    return {{"lambda", rep.lambda},
            {"phase", phase_name(rep.phase)},
            {"G", finite_or_null(rep.log_drift)},
            {"vartheta", finite_or_null(rep.vartheta)},
            {"lambda_crit_mb", rep.lambda_crit_mb},
            {"lambda_max_mb", rep.lambda_max_mb},
            {"lambda_crit_fb", rep.lambda_crit_fb},
            {"singular", rep.singular}};
}

json estimate_to_json(const McEstimate& est) {
    return {{"p_hat", est.p_hat},     {"ci_lo", est.ci_lo},   {"ci_hi", est.ci_hi},
            {"successes", est.successes}, {"trials", est.trials}, {"truncated", est.truncated}};
}

json fit_to_json(const ExponentFit& fit) {
    return {{"slope", fit.slope},
            {"intercept", fit.intercept},
            {"stderr_slope", fit.stderr_slope},
            {"points_used", fit.points_used},
            {"excluded_thresholds", fit.excluded_thresholds}};
}

json hitting_stats_to_json(const HittingTimeStats& stats) {
    return {{"G", stats.log_drift},
            {"band_lo", stats.band_lo},
            {"band_hi", stats.band_hi},
            {"fraction_in_band", stats.fraction_in_band},
            {"in_band", stats.in_band},
            {"early", stats.early},
            {"late", stats.late},
            {"truncated", stats.truncated},
            {"trials", stats.trials},
            {"normalized_quantiles",
             {{"p05", stats.normalized_quantiles[0]},
              {"p25", stats.normalized_quantiles[1]},
              {"p50", stats.normalized_quantiles[2]},
              {"p75", stats.normalized_quantiles[3]},
              {"p95", stats.normalized_quantiles[4]}}}};
}

json post_spike_to_json(const PostSpikeProfile& prof) {
    return {{"M", prof.M},
            {"lambda_target", prof.lambda_target},
            {"lambda_coll", prof.lambda_coll},
            {"lambda_plus", prof.lambda_plus},
            {"trials", prof.trials},
            {"spiking", prof.spiking},
            {"dropped", prof.dropped},
            {"frac_within_window", prof.frac_within_window},
            {"window_cdf", prof.window_cdf},
            {"post_pred_cdf", prof.post_pred_cdf},
            {"m_minus_divisors", prof.m_minus_divisors},
            {"dip_fractions", prof.dip_fractions},
            {"fitted_dip_exponent", prof.fitted_dip_exponent}};
}

json relu_channels_to_json(const ReluChannelResult& result) {
    const auto ladder_json = [](const std::vector<LadderPoint>& ladder) {
        json arr = json::array();
        for (const auto& pt : ladder)
            arr.push_back({{"M", pt.threshold}, {"estimate", estimate_to_json(pt.estimate)}});
        return arr;
    };
    json j = {{"plus_channel", ladder_json(result.plus_channel)},
              {"minus_channel", ladder_json(result.minus_channel)},
              {"split_crosscheck_ok", result.split_crosscheck_ok},
              {"full_runs", result.full_runs},
              {"full_flips", result.full_flips},
              {"max_channel_deviation", result.max_channel_deviation}};
    j["fit_plus"] = result.fit_plus ? fit_to_json(*result.fit_plus) : json(nullptr);
    j["fit_minus"] = result.fit_minus ? fit_to_json(*result.fit_minus) : json(nullptr);
    return j;
}

std::string run_status_name(RunStatus status) {
    switch (status) {
        case RunStatus::Completed: return "completed";
        case RunStatus::HitPredThreshold: return "hit_pred_threshold";
        case RunStatus::HitKernelThreshold: return "hit_kernel_threshold";
        case RunStatus::Diverged: return "diverged";
    }
    return "?";
}

json stopping_summary_json(const Trajectory& traj) {
    json j;
    j["tau_pred"] = traj.tau_pred ? json(*traj.tau_pred) : json(nullptr);
    j["tau_kernel"] = traj.tau_kernel ? json(*traj.tau_kernel) : json(nullptr);
    j["status"] = run_status_name(traj.status);
    j["truncated"] = traj.truncated;
    j["final_mu"] = traj.final_state.mu;
    j["final_lam"] = traj.final_state.lam;
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error("short write to " + path);
}

}  // namespace catapult
