#pragma once

#include "levydim/boxcount.hpp"
#include "levydim/config.hpp"
#include "levydim/criteria.hpp"
#include "levydim/solver.hpp"

#include <filesystem>
#include <string>

namespace levydim {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// One machine-readable result record. Reports append as JSON lines; every
/// numeric claim carries its tolerance or standard error, and the run is
/// reproducible from (config_hash, seed) up to the timing field.
struct Report {
    std::string command;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    double timing_ms = 0.0;
    HypothesisFlags hypothesis_flags;
    Json payload;

    Json to_json() const;
};

Json verdict_to_json(const Verdict& v);
Json dimension_result_to_json(const DimensionResult& r);
Json box_estimate_to_json(const BoxCountEstimate& e);

/// Append one report line to <dir>/reports.jsonl (created on demand).
void append_report(const std::filesystem::path& dir, const Report& report);

// CSV side files for plotting by external tools.
void write_shells_csv(const std::filesystem::path& path, const ShellProfile& profile);
void write_trail_csv(const std::filesystem::path& path, const std::vector<TrailEntry>& trail);
void write_boxes_csv(const std::filesystem::path& path, const OccupancyGrid& grid);

} // namespace levydim
