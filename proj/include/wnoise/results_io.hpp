#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wnoise/experiments.hpp"

namespace wnoise {

inline constexpr std::string_view kCsvHeader = "experiment,N,k,multiplier,statistic,mean,stderr,trials,excluded";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Header line plus one line per row; reals printed with 17 significant digits.
std::string format_csv(const std::vector<ResultRow>& rows);
/// Inverse of format_csv. Throws ConfigError on a malformed table.
std::vector<ResultRow> parse_csv(std::string_view text);

struct ExcludedCount {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t excluded = 0;

  bool operator==(const ExcludedCount&) const = default;
};

struct RunManifest {
  std::string command;
  std::string config_text;  // to_config_text of the effective config
  std::uint64_t seed = 0;
  std::string tool_version{kToolVersion};
  std::string started;   // ISO 8601, UTC
  std::string finished;
  std::size_t threads = 1;
  std::vector<ExcludedCount> excluded;  // one per (N, k) cell
  std::vector<std::string> outputs;     // file names relative to the manifest

  bool operator==(const RunManifest&) const = default;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(std::string_view text);

/// Distinct (N, k) cells of `rows` with their excluded counts, in first-seen order.
std::vector<ExcludedCount> excluded_cells(const std::vector<ResultRow>& rows);

/// Writes `contents` to a temporary sibling and renames it over `path`.
/// Throws DomainError if the file cannot be written.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

/// Writes `<stem>.csv` and `<stem>.manifest.json` into `out_dir`, creating it if
/// needed. The CSV name is appended to the manifest's outputs, and the manifest is
/// written last.
void write_results(const std::vector<ResultRow>& rows, RunManifest manifest, const std::filesystem::path& out_dir,
                   const std::string& stem);

/// Current UTC time as an ISO 8601 string.
std::string utc_timestamp();

}  // namespace wnoise
