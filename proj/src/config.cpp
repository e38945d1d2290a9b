#include "wnoise/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "wnoise/errors.hpp"
#include "wnoise/results_io.hpp"

namespace wnoise {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Context {
  std::size_t line;
  std::string key;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("line " + std::to_string(line) + ", key '" + key + "': " + msg);
  }
};

std::vector<std::string_view> split_list(std::string_view value, const Context& ctx) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') ctx.fail("expected a list like [a, b, c]");
  std::vector<std::string_view> items;
  std::string_view body = trim(value.substr(1, value.size() - 2));
  if (body.empty()) return items;
  while (true) {
    const auto comma = body.find(',');
    const std::string_view item = trim(body.substr(0, comma));
    if (item.empty()) ctx.fail("empty list element");
    items.push_back(item);
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  return items;
}

std::uint64_t parse_uint(std::string_view s, const Context& ctx) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) ctx.fail("expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

double parse_real(std::string_view s, const Context& ctx) {
  if (s == "full" || s == "inf") return kFullResample;
  const std::string owned(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size() || errno == ERANGE)
    ctx.fail("expected a number, got '" + owned + "'");
  return v;
}

std::string format_real(double v) {
  if (v == kFullResample) return "full";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T, class F>
std::string format_list(const std::vector<T>& xs, F fmt) {
  std::string out = "[";
  for (std::size_t t = 0; t < xs.size(); ++t) {
    if (t) out += ", ";
    out += fmt(xs[t]);
  }
  return out + "]";
}

using Setter = std::function<void(SweepConfig&, std::string_view, const Context&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"N_list",
       [](SweepConfig& c, std::string_view v, const Context& ctx) {
         c.n_list.clear();
         for (auto item : split_list(v, ctx)) c.n_list.push_back(parse_uint(item, ctx));
       }},
      {"k_list",
       [](SweepConfig& c, std::string_view v, const Context& ctx) {
         c.k_list.clear();
         for (auto item : split_list(v, ctx)) c.k_list.push_back(parse_uint(item, ctx));
       }},
      {"multipliers",
       [](SweepConfig& c, std::string_view v, const Context& ctx) {
         c.multipliers.clear();
         for (auto item : split_list(v, ctx)) c.multipliers.push_back(parse_real(item, ctx));
       }},
      {"trials", [](SweepConfig& c, std::string_view v, const Context& ctx) { c.trials = parse_uint(v, ctx); }},
      {"seed", [](SweepConfig& c, std::string_view v, const Context& ctx) { c.seed = parse_uint(v, ctx); }},
      {"offdiag",
       [](SweepConfig& c, std::string_view v, const Context& ctx) {
         try {
           c.entry.offdiag = parse_entry_law(v);
         } catch (const ConfigError& e) {
           ctx.fail(e.what());
         }
       }},
      {"sigma0", [](SweepConfig& c, std::string_view v, const Context& ctx) { c.entry.diag_sigma0 = parse_real(v, ctx); }},
      {"tail_delta",
       [](SweepConfig& c, std::string_view v, const Context& ctx) { c.entry.tail_delta = parse_real(v, ctx); }},
      {"tol", [](SweepConfig& c, std::string_view v, const Context& ctx) { c.tol = parse_real(v, ctx); }},
      {"dense_max_dim",
       [](SweepConfig& c, std::string_view v, const Context& ctx) { c.dense_max_dim = parse_uint(v, ctx); }},
      {"pair_samples",
       [](SweepConfig& c, std::string_view v, const Context& ctx) { c.pair_samples = parse_uint(v, ctx); }},
      {"bootstrap", [](SweepConfig& c, std::string_view v, const Context& ctx) { c.bootstrap = parse_uint(v, ctx); }},
      {"chaos_corpus",
       [](SweepConfig& c, std::string_view v, const Context& ctx) { c.chaos_corpus = parse_uint(v, ctx); }},
      {"chaos_max_n",
       [](SweepConfig& c, std::string_view v, const Context& ctx) { c.chaos_max_n = parse_uint(v, ctx); }},
      {"statistics",
       [](SweepConfig& c, std::string_view v, const Context& ctx) {
         c.statistics.clear();
         for (auto item : split_list(v, ctx)) c.statistics.emplace_back(item);
       }},
  };
  return table;
}

}  // namespace

SweepConfig parse_config_text(std::string_view text) {
  SweepConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const Context ctx{line_no, std::string(trim(line.substr(0, eq)))};
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(ctx.key);
    if (it == setters().end()) ctx.fail("unknown key");
    if (!seen.insert(ctx.key).second) ctx.fail("duplicate key");
    if (value.empty()) ctx.fail("missing value");
    it->second(cfg, value, ctx);
  }
  validate(cfg);
  return cfg;
}

SweepConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") return parse_config_text(manifest_from_json(buf.str()).config_text);
  return parse_config_text(buf.str());
}

std::string to_config_text(const SweepConfig& cfg) {
  auto uint = [](std::uint64_t v) { return std::to_string(v); };
  std::ostringstream out;
  out << "N_list = " << format_list(cfg.n_list, uint) << '\n';
  out << "k_list = " << format_list(cfg.k_list, uint) << '\n';
  out << "multipliers = " << format_list(cfg.multipliers, format_real) << '\n';
  out << "trials = " << cfg.trials << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "offdiag = " << to_string(cfg.entry.offdiag) << '\n';
  out << "sigma0 = " << format_real(cfg.entry.diag_sigma0) << '\n';
  out << "tail_delta = " << format_real(cfg.entry.tail_delta) << '\n';
  out << "tol = " << format_real(cfg.tol) << '\n';
  out << "dense_max_dim = " << cfg.dense_max_dim << '\n';
  out << "pair_samples = " << cfg.pair_samples << '\n';
  out << "bootstrap = " << cfg.bootstrap << '\n';
  out << "chaos_corpus = " << cfg.chaos_corpus << '\n';
  out << "chaos_max_n = " << cfg.chaos_max_n << '\n';
  out << "statistics = " << format_list(cfg.statistics, [](const std::string& s) { return s; }) << '\n';
  return out.str();
}

}  // namespace wnoise
