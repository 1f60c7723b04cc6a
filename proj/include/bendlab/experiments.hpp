#pragma once

// Experiment drivers behind the bendlab command line.  Each takes a JSON
// config (missing fields fall back to the defaults documented in the README)
// and returns a table, a JSON summary and the list of checked assertions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bendlab/io.hpp"

namespace bendlab {

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CommandResult {
  io::ResultTable table;
  io::json summary;
  std::vector<Assertion> assertions;
  std::optional<std::string> svg;  // render only

  bool passed() const;
};

// Leaves (1/n, n) with weight +1 and (-1/n, -n) with weight -1.
FiniteLamination counterexample_lamination(double n);

CommandResult cmd_counterexample(const io::json& config);
CommandResult cmd_converge(const io::json& config);
CommandResult cmd_bounds(const io::json& config, std::optional<std::uint64_t> seed = std::nullopt);
CommandResult cmd_approx_sweep(const io::json& config);
CommandResult cmd_render(const io::json& config);

// Random geodesic with source in |z| <= tanh(r/2) and target in
// |z| >= coth(r/2), from four uniforms in [0, 1).
OrientedGeodesic cylinder_geodesic(double r, double u1, double u2, double u3, double u4);

}  // namespace bendlab
