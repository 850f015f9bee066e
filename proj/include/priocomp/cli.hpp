#pragma once

#include <filesystem>

#include "priocomp/config.hpp"

namespace priocomp {

/// Command handlers shared by the binary and the integration tests. Each
/// reads/writes the conventional files inside cfg.output_dir:
///   q_<variant>.json, sampler_<variant>.json, train_<variant>.csv
///   weight_params.json, calibration_report.csv
///   compound.json, sampler_compound.json            (zero-shot)
///   compound_trained.json, sampler_compound_trained.json,
///   constraint_reports.csv                          (after explore)
///   eval_report.csv, vector_field.csv, trajectories.csv, scene.svg
void cmd_train(const ExperimentConfig& cfg, EnvVariant variant);
void cmd_calibrate(const ExperimentConfig& cfg);
void cmd_compose(const ExperimentConfig& cfg);
void cmd_explore(const ExperimentConfig& cfg);
void cmd_eval(const ExperimentConfig& cfg);
void cmd_render(const ExperimentConfig& cfg, int grid_n);

/// CLI entry: prio-compose <command> --config <path> [--variant v] [--seed N]
/// [--out DIR] [--grid N]. Exit codes: 0 ok, 1 runtime failure, 2 usage.
int cli_run(int argc, const char* const* argv);

}  // namespace priocomp
