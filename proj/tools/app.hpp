#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "restrict4/adapt.hpp"
#include "restrict4/oscint.hpp"
#include "restrict4/report.hpp"
#include "restrict4/restrict.hpp"

namespace restrict4::app {

struct RunConfig {
  std::string poly;
  double bump_radius = 0.5;
  std::uint64_t seed = 0;
  std::uint64_t budget = QuadratureOptions{}.max_evaluations;
  double xi_min = 8.0;
  double xi_max = 512.0;
  int n_mags = 8;
  int n_dirs = 9;
  int starts = 64;
  int iters = 40;
  std::optional<std::string> h_override;
  std::optional<std::string> p;
  double delta_min = 1.0 / 512.0;
  double delta_max = 0.25;
  int n_scales = 8;
  double cap_constant = 0.125;
  std::string output_dir;
  /// Worker threads; 0 = all cores. Not echoed: results do not depend on it.
  unsigned threads = 0;
};

/// Every field that can influence a result, for embedding in outputs.
Json config_json(const RunConfig& c);

struct CommandOutput {
  int exit_code = 0;
  Json json;
  /// File name -> contents, written under output_dir when it is set.
  std::vector<std::pair<std::string, std::string>> files;
  std::vector<std::string> summary;
};

struct VerifyReport {
  ExponentReport exponents;
  DecayFit decay;
  std::vector<KnappReport> knapp;
  bool convex = true;
  bool finite_line_type = true;
  bool decay_ok = false;
  bool knapp_ok = false;
  bool pass = false;
  Warnings warnings;
};

/// The whole chain: newton -> height -> exponents -> decay -> Knapp at
/// p* - 1/10, p*, p* + 1/10.
VerifyReport verify(const RunConfig& c);
Json verify_json(const VerifyReport& r);

CommandOutput cmd_parse(const RunConfig& c);
CommandOutput cmd_newton(const RunConfig& c);
CommandOutput cmd_height(const RunConfig& c);
CommandOutput cmd_exponents(const RunConfig& c);
CommandOutput cmd_decay(const RunConfig& c);
CommandOutput cmd_knapp(const RunConfig& c);
CommandOutput cmd_verify(const RunConfig& c);

/// Full command-line entry point. Exit codes: 0 ok, 1 other failure,
/// 2 parse error, 3 degenerate input, 4 quadrature budget exceeded.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace restrict4::app
