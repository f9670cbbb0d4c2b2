#pragma once

#include <string>

#include <json.hpp>

#include "catapult/dataset.hpp"
#include "catapult/dynamics_linear.hpp"
#include "catapult/dynamics_relu.hpp"
#include "catapult/montecarlo.hpp"
#include "catapult/phase.hpp"

namespace catapult {

// Dataset file schema: {"eta": <float>, "points": [{"s": <float>, "p": <float>}, ...]}
// Field names are exact; unknown fields are rejected (JsonSchemaError).
Dataset dataset_from_json(const nlohmann::json& j);
Dataset dataset_from_file(const std::string& path);
nlohmann::json dataset_to_json(const Dataset& ds);

// vartheta = +inf serialises as null
nlohmann::json phase_report_to_json(const PhaseReport& rep);
nlohmann::json estimate_to_json(const McEstimate& est);
nlohmann::json fit_to_json(const ExponentFit& fit);
nlohmann::json hitting_stats_to_json(const HittingTimeStats& stats);
nlohmann::json post_spike_to_json(const PostSpikeProfile& prof);
nlohmann::json relu_channels_to_json(const ReluChannelResult& result);

nlohmann::json stopping_summary_json(const Trajectory& traj);

std::string run_status_name(RunStatus status);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace catapult
