#include "omnibus/scenario_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "omnibus/errors.hpp"

namespace omnibus {

namespace {

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  return text;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> items;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view item = trim(text.substr(pos, comma - pos));
    if (!item.empty()) items.push_back(item);
    if (comma == text.size()) break;
    pos = comma + 1;
  }
  return items;
}

[[noreturn]] void fail(const std::string& key, int lineno, const std::string& what) {
  throw ConfigError("config key '" + key + "' (line " + std::to_string(lineno) + "): " + what);
}

template <typename T>
T parse_number(std::string_view text, const std::string& key, int lineno) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(key, lineno, "cannot parse '" + std::string(text) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_number_list(std::string_view text, const std::string& key, int lineno) {
  std::vector<T> values;
  for (std::string_view item : split_list(text)) {
    values.push_back(parse_number<T>(item, key, lineno));
  }
  if (values.empty()) fail(key, lineno, "empty list");
  return values;
}

void apply_key(ScenarioBlock& block, const std::string& key, std::string_view value, int lineno) {
  try {
    if (key == "family") {
      block.family = family_from_name(value);
    } else if (key == "m") {
      block.m = parse_number<int>(value, key, lineno);
    } else if (key == "m1") {
      block.m1_list = parse_number_list<int>(value, key, lineno);
    } else if (key == "n") {
      block.n_list = parse_number_list<int>(value, key, lineno);
    } else if (key == "gamma") {
      block.gamma = parse_number<double>(value, key, lineno);
    } else if (key == "exp_rate_scale") {
      block.exp_rate_scale = parse_number<double>(value, key, lineno);
    } else if (key == "p0") {
      block.p0 = parse_number<double>(value, key, lineno);
    } else if (key == "p1") {
      block.p1 = parse_number<double>(value, key, lineno);
    } else if (key == "alpha") {
      block.alpha = parse_number<double>(value, key, lineno);
    } else if (key == "nsim") {
      block.nsim = parse_number<std::int64_t>(value, key, lineno);
    } else if (key == "methods") {
      block.methods.clear();
      for (std::string_view item : split_list(value)) {
        block.methods.push_back(method_from_name(item));
      }
      if (block.methods.empty()) fail(key, lineno, "empty method list");
    } else if (key == "seed") {
      block.seed = parse_number<std::uint64_t>(value, key, lineno);
    } else if (key == "replicates") {
      block.replicates = parse_number<std::int64_t>(value, key, lineno);
    } else if (key == "alpha0") {
      block.alpha0 = parse_number<double>(value, key, lineno);
    } else if (key == "power_alpha") {
      block.power_alpha = parse_number<double>(value, key, lineno);
    } else {
      fail(key, lineno, "unknown key");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(key, lineno, e.what());
  }
}

void finish_block(std::vector<ScenarioBlock>& blocks, ScenarioBlock& block, bool open,
                  int lineno) {
  if (!open) return;
  if (block.methods.empty()) {
    throw ConfigError("config scenario ending at line " + std::to_string(lineno) +
                      ": key 'methods' is required");
  }
  for (int m1 : block.m1_list) {
    if (m1 < 0 || m1 > block.m) {
      throw ConfigError("config scenario ending at line " + std::to_string(lineno) +
                        ": m1=" + std::to_string(m1) + " outside [0, m]");
    }
  }
  blocks.push_back(block);
}

}  // namespace

std::vector<ScenarioBlock> parse_power_config(std::istream& in) {
  std::vector<ScenarioBlock> blocks;
  ScenarioBlock current;
  bool open = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text != "[scenario]") {
        throw ConfigError("config line " + std::to_string(lineno) + ": expected [scenario], got '" +
                          std::string(text) + "'");
      }
      finish_block(blocks, current, open, lineno);
      current = ScenarioBlock{};
      open = true;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + std::string(text) + "'");
    }
    if (!open) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside any [scenario] section");
    }
    const std::string key{trim(text.substr(0, eq))};
    const std::string_view value = trim(text.substr(eq + 1));
    apply_key(current, key, value, lineno);
  }
  finish_block(blocks, current, open, lineno);
  if (blocks.empty()) {
    throw ConfigError("config contains no [scenario] section");
  }
  return blocks;
}

std::vector<ScenarioBlock> parse_power_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  return parse_power_config(in);
}

void write_power_csv_header(std::ostream& out) {
  out << "family,m,m1,n,gamma,method,nsim,rejections,power,seed,rng_id\n";
}

void write_power_csv_row(std::ostream& out, const PowerResult& result) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%.17g,%s,%lld,%lld,%.17g,%llu,%s\n",
                std::string(family_name(result.scenario.family)).c_str(), result.scenario.m,
                result.scenario.m1, result.scenario.n, result.scenario.gamma,
                result.method.c_str(), static_cast<long long>(result.nsim),
                static_cast<long long>(result.rejections), result.power,
                static_cast<unsigned long long>(result.seed), result.rng_id.c_str());
  out << buf;
}

}  // namespace omnibus
