#ifndef OMNIBUS_SCENARIO_CONFIG_HPP
#define OMNIBUS_SCENARIO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "omnibus/scenario.hpp"

namespace omnibus {

// One `[scenario]` block of a power-study configuration. m1 and n may be
// lists; the study runs the cartesian product.
struct ScenarioBlock {
  Family family = Family::ZTestEqual;
  int m = 10;
  std::vector<int> m1_list{0};
  std::vector<int> n_list{100};
  double gamma = 0.3;
  double exp_rate_scale = 3.0;
  double p0 = 0.5;
  double p1 = 0.5;
  double alpha = 0.05;
  std::int64_t nsim = 10000;
  std::vector<Method> methods;
  std::uint64_t seed = 1;
  std::int64_t replicates = 10000;  // Monte-Carlo calibration size B
  double alpha0 = 0.5;
  double power_alpha = 0.5;
};

// Flat key = value text, '#' comments, one or more [scenario] sections.
// Violations name the offending key and line. Throws ConfigError.
std::vector<ScenarioBlock> parse_power_config(std::istream& in);
std::vector<ScenarioBlock> parse_power_config_file(const std::filesystem::path& path);

// Exact header:
// family,m,m1,n,gamma,method,nsim,rejections,power,seed,rng_id
void write_power_csv_header(std::ostream& out);
void write_power_csv_row(std::ostream& out, const PowerResult& result);

}  // namespace omnibus

#endif
