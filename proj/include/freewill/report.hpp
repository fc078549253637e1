#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "freewill/config.hpp"
#include "freewill/experiment.hpp"

namespace freewill {

// Writes one run's interleaved trace as CSV with header
//   t,agent,action,reward,T,eps,entropy_bits,entropy_nats,novelty,psi_chosen
// one row per step per agent, values at 9 significant digits, LF endings.
void write_trace_csv(const RunTrace& trace, const PhaseSchedule& schedule,
                     const std::filesystem::path& path);

// One row per time index with <metric>_<agent>_mean / _std columns. The
// rolling-reward series is window-1 entries shorter than the others; its
// cells are left empty past its end.
void write_aggregate_csv(const AggregateResult& result, long total_steps,
                         const std::filesystem::path& path);

struct SvgSeries {
    std::string label;
    std::vector<double> mean;
    std::vector<double> stddev;  // same length; band is mean +/- stddev
};

struct SvgMarker {
    double x = 0.0;
    std::string label;
};

struct SvgOptions {
    std::string title;
    std::string x_label = "time step";
    std::string y_label;
    int width = 800;
    int height = 400;
};

// Self-contained SVG 1.1: a polyline per mean series, a translucent band
// polygon per std envelope, a dashed vertical line per marker, axes and a
// legend. Identical inputs produce identical bytes.
void emit_svg(const std::vector<SvgSeries>& series, const std::vector<SvgMarker>& markers,
              const std::filesystem::path& path, const SvgOptions& options = {});

struct ManifestFile {
    std::string name;     // path relative to the manifest's directory
    std::string sha256;   // lowercase hex
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string config_json;  // full effective config echo
    std::vector<std::uint64_t> seeds;
    std::string version;
    std::string created_utc;  // ISO-8601, e.g. 2026-08-09T12:00:00Z
    std::vector<ManifestFile> files;
};

std::string sha256_file(const std::filesystem::path& path);

// Hashes every named file (relative to `dir`). Missing files throw
// ManifestInconsistent.
RunManifest build_manifest(const std::string& config_json,
                           const std::vector<std::uint64_t>& seeds,
                           const std::filesystem::path& dir,
                           const std::vector<std::string>& file_names);

// JSON document with sorted keys.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> problems;  // "name: missing" or "name: hash mismatch"
};

// Re-hashes every file listed in the manifest at `dir`/manifest.json.
VerifyReport verify_manifest_dir(const std::filesystem::path& dir);

// Runs the full reporting pipeline into `dir`: per-seed trace CSVs,
// aggregate.csv, the five standard plots, run_config.json and manifest.json.
void write_run_outputs(const AggregateResult& result, const RunConfig& config,
                       const std::filesystem::path& dir);

}  // namespace freewill
