#include "wnoise/results_io.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wnoise/errors.hpp"

namespace wnoise {
namespace {

void append_real(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void check_field(const std::string& s) {
  if (s.find_first_of(",\n\r\"") != std::string::npos)
    throw DomainError("CSV text field contains a separator: '" + s + "'");
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  return out;
}

std::uint64_t to_uint(std::string_view s, std::size_t line) {
  char* end = nullptr;
  const std::string owned(s);
  const unsigned long long v = std::strtoull(owned.c_str(), &end, 10);
  if (owned.empty() || end != owned.c_str() + owned.size() || owned.front() == '-')
    throw ConfigError("CSV line " + std::to_string(line) + ": bad integer '" + owned + "'");
  return v;
}

double to_real(std::string_view s, std::size_t line) {
  char* end = nullptr;
  const std::string owned(s);
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size())
    throw ConfigError("CSV line " + std::to_string(line) + ": bad number '" + owned + "'");
  return v;
}

}  // namespace

std::string format_csv(const std::vector<ResultRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    check_field(r.experiment);
    check_field(r.statistic);
    out += r.experiment;
    out += ',' + std::to_string(r.n) + ',' + std::to_string(r.k) + ',';
    append_real(out, r.multiplier);
    out += ',' + r.statistic + ',';
    append_real(out, r.mean);
    out += ',';
    append_real(out, r.std_error);
    out += ',' + std::to_string(r.trials) + ',' + std::to_string(r.excluded) + '\n';
  }
  return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  std::size_t line_no = 0;
  bool header = true;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != kCsvHeader) throw ConfigError("CSV header mismatch: '" + std::string(line) + "'");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 9) throw ConfigError("CSV line " + std::to_string(line_no) + ": expected 9 fields");
    ResultRow r;
    r.experiment = std::string(f[0]);
    r.n = to_uint(f[1], line_no);
    r.k = to_uint(f[2], line_no);
    r.multiplier = to_real(f[3], line_no);
    r.statistic = std::string(f[4]);
    r.mean = to_real(f[5], line_no);
    r.std_error = to_real(f[6], line_no);
    r.trials = to_uint(f[7], line_no);
    r.excluded = to_uint(f[8], line_no);
    rows.push_back(std::move(r));
  }
  if (header) throw ConfigError("CSV is empty");
  return rows;
}

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  j["seed"] = m.seed;
  j["threads"] = m.threads;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["config"] = m.config_text;
  auto& cells = j["excluded"] = nlohmann::ordered_json::array();
  for (const auto& c : m.excluded) cells.push_back({{"N", c.n}, {"k", c.k}, {"excluded", c.excluded}});
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.threads = j.at("threads").get<std::size_t>();
    m.started = j.at("started").get<std::string>();
    m.finished = j.at("finished").get<std::string>();
    m.config_text = j.at("config").get<std::string>();
    for (const auto& c : j.at("excluded"))
      m.excluded.push_back({c.at("N").get<std::size_t>(), c.at("k").get<std::size_t>(),
                            c.at("excluded").get<std::size_t>()});
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

std::vector<ExcludedCount> excluded_cells(const std::vector<ResultRow>& rows) {
  std::vector<ExcludedCount> out;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& r : rows) {
    if (r.n == 0) continue;
    if (seen.insert({r.n, r.k}).second) out.push_back({r.n, r.k, r.excluded});
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DomainError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DomainError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_results(const std::vector<ResultRow>& rows, RunManifest manifest, const std::filesystem::path& out_dir,
                   const std::string& stem) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw DomainError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  write_file_atomic(out_dir / (stem + ".csv"), format_csv(rows));
  manifest.outputs.insert(manifest.outputs.begin(), stem + ".csv");
  if (manifest.excluded.empty()) manifest.excluded = excluded_cells(rows);
  if (manifest.finished.empty()) manifest.finished = utc_timestamp();
  write_file_atomic(out_dir / (stem + ".manifest.json"), manifest_to_json(manifest));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace wnoise
