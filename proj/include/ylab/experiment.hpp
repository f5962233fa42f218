#pragma once

#include <filesystem>

#include "ylab/config.hpp"

namespace ylab {

/// Runs the configured study and writes its artifacts (CSV tables, curve
/// files, summary.json, snapshots) plus a manifest listing every artifact
/// with its content hash. Returns 0 on success, 2 on solver failure; partial
/// artifacts are kept and the manifest marks the run failed.
int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& outdir);

}  // namespace ylab
