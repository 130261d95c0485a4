#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bohm/cli/config.hpp"
#include "bohm/experiment.hpp"

namespace bohm::cli {

struct ReportBundle {
  nlohmann::json report;
  /// False when the run is invalidated (too many aborted trajectories).
  bool valid = true;
  /// Extra bundle files as (file name, contents).
  std::vector<std::pair<std::string, std::string>> files;
};

OscillatorParams oscillator_params(const RunConfig& cfg);
InterferometerParams interferometer_params(const RunConfig& cfg);
WavefunctionModel interferometer_model(const RunConfig& cfg);
DetectorPair detector_pair(const RunConfig& cfg);

/// Runs the pipeline named by cfg.preset. Deterministic for a fixed config.
/// trajectories.csv (member 0) is added when cfg.emit_trajectories is set and
/// the preset integrates Bohmian trajectories.
ReportBundle run_preset(const RunConfig& cfg);

}  // namespace bohm::cli
