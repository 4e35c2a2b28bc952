#pragma once

#include "atflow/config.hpp"
#include "atflow/flow.hpp"
#include "atflow/sweep.hpp"

#include <string>

namespace atflow {

/// energies.csv column order; one row per step, 17-significant-digit floats.
extern const char* kEnergiesHeader;

/// Writes energies.csv, run_meta.txt and any snapshots into dir (created if
/// missing). Byte-stable for identical traces.
void write_trace(const Trace& trace, const RunConfig& cfg, const std::string& dir);

/// Writes sweep_report.csv into dir.
void write_sweep_report(const SweepReport& report, const std::string& dir);

}  // namespace atflow
