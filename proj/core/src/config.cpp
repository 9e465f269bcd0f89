#include "epcfg/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace epcfg {

namespace {

struct Line {
  std::size_t number;
  std::string key;
  std::string value;
};

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw MalformedConfig("config line " + std::to_string(line) + ": " + message);
}

double parse_double(const Line& l) {
  const std::string& s = l.value;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(l.number, "'" + s + "' is not a number");
  return v;
}

template <typename Int>
Int parse_int(const Line& l) {
  const std::string& s = l.value;
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(l.number, "'" + s + "' is not a valid integer");
  return v;
}

MixtureComponent parse_component(const Line& l, std::int64_t dim) {
  std::istringstream stream(l.value);
  std::vector<double> fields;
  std::string token;
  while (stream >> token) {
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
      fail(l.number, "'" + token + "' is not a number");
    fields.push_back(v);
  }
  const auto expected = static_cast<std::size_t>(dim) + 2;
  if (fields.size() != expected)
    fail(l.number, "component needs weight, " + std::to_string(dim) +
                       " mean entries and stddev (" +
                       std::to_string(expected) + " numbers), got " +
                       std::to_string(fields.size()));
  MixtureComponent c;
  c.weight = fields.front();
  c.stddev = fields.back();
  c.mean.assign(fields.begin() + 1, fields.end() - 1);
  return c;
}

}  // namespace

MixtureModel ExperimentConfig::cond_model() const {
  return MixtureModel::create(dim, cond);
}

MixtureModel ExperimentConfig::uncond_model() const {
  return MixtureModel::create(dim, uncond);
}

ExperimentConfig parse_config(std::string_view text) {
  static const std::set<std::string, std::less<>> kKnownKeys = {
      "lambda",   "mode",  "l",     "h",    "phi",     "steps",
      "beta_min", "beta_max", "dim", "cond", "uncond", "batch",
      "seed",     "guidance_space", "out_dir", "threads"};

  std::vector<Line> lines;
  std::size_t line_number = 0;
  std::size_t cursor = 0;
  while (cursor <= text.size()) {
    const auto newline = text.find('\n', cursor);
    std::string_view raw = text.substr(
        cursor, newline == std::string_view::npos ? text.size() - cursor
                                                  : newline - cursor);
    cursor = newline == std::string_view::npos ? text.size() + 1 : newline + 1;
    ++line_number;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;

    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(line_number, "expected key = value, got '" + stripped + "'");
    Line l{line_number, trim(std::string_view(stripped).substr(0, eq)),
           trim(std::string_view(stripped).substr(eq + 1))};
    if (l.key.empty()) fail(line_number, "empty key");
    if (!kKnownKeys.count(l.key))
      fail(line_number, "unknown key '" + l.key + "'");
    if (l.value.empty()) fail(line_number, "key '" + l.key + "' has no value");
    lines.push_back(std::move(l));
  }

  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::vector<Line> components;

  for (const auto& l : lines) {
    if (l.key == "cond" || l.key == "uncond") {
      components.push_back(l);
      continue;
    }
    if (!seen.insert(l.key).second)
      fail(l.number, "duplicate key '" + l.key + "'");

    if (l.key == "lambda") cfg.params.strength = parse_double(l);
    else if (l.key == "mode") {
      try {
        cfg.params.mode = guidance_mode_from_string(l.value);
      } catch (const Error& e) {
        fail(l.number, e.what());
      }
    } else if (l.key == "l") cfg.params.window.low = parse_double(l);
    else if (l.key == "h") cfg.params.window.high = parse_double(l);
    else if (l.key == "phi") cfg.params.phi = parse_double(l);
    else if (l.key == "steps") cfg.steps = parse_int<int>(l);
    else if (l.key == "beta_min") cfg.beta_min = parse_double(l);
    else if (l.key == "beta_max") cfg.beta_max = parse_double(l);
    else if (l.key == "dim") cfg.dim = parse_int<std::int64_t>(l);
    else if (l.key == "batch") cfg.batch = parse_int<int>(l);
    else if (l.key == "seed") cfg.seed = parse_int<std::uint64_t>(l);
    else if (l.key == "threads") cfg.threads = parse_int<int>(l);
    else if (l.key == "guidance_space") {
      try {
        cfg.space = guidance_space_from_string(l.value);
      } catch (const Error& e) {
        fail(l.number, e.what());
      }
    } else if (l.key == "out_dir") cfg.out_dir = l.value;
  }

  if (cfg.dim < 1) throw MalformedConfig("dim must be >= 1");
  for (const auto& l : components) {
    MixtureComponent c = parse_component(l, cfg.dim);
    (l.key == "cond" ? cfg.cond : cfg.uncond).push_back(std::move(c));
  }

  if (cfg.cond.empty()) throw MalformedConfig("missing required key 'cond'");
  if (cfg.uncond.empty()) throw MalformedConfig("missing required key 'uncond'");
  if (cfg.out_dir.empty()) throw MalformedConfig("missing required key 'out_dir'");
  if (cfg.batch < 1) throw MalformedConfig("batch must be >= 1");
  if (cfg.steps < 1) throw MalformedConfig("steps must be >= 1");
  cfg.params.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoFailure("read from " + path.string() + " failed");
  return parse_config(buffer.str());
}

std::optional<std::uint64_t> env_seed_override() {
  const char* raw = std::getenv("EPCFG_SEED");
  if (raw == nullptr) return std::nullopt;
  const std::string_view s(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw MalformedConfig("EPCFG_SEED is set but not a valid unsigned integer");
  return v;
}

}  // namespace epcfg
