#pragma once

#include "orlicz/gaussian_measure.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace orlicz::cli {

/// Settings shared by every subcommand. Loaded from a JSON file with
/// `--config`, then ORLICZ_IG_SEED, then explicit flags.
struct RunConfig {
  std::string backend = "auto";  // auto | adaptive | quadrature | montecarlo
  int dim = 1;
  int order = 64;                // Gauss-Hermite nodes per axis
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 20240917;
  double rel_tol = 1e-12;        // adaptive backend
  std::string format = "auto";   // auto | json | csv; auto is CSV for tailcert, JSON elsewhere
  std::vector<std::string> fields;  // default for --f when the flag is absent

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);

  bool operator==(const RunConfig&) const = default;
};

GaussianIntegrator make_integrator(const RunConfig& cfg);

/// JSON text with every floating-point number printed to 12 significant
/// digits; non-finite numbers become null. `indent` < 0 gives one line.
std::string dump(const nlohmann::json& j, int indent = -1);

/// Runs one subcommand. Returns 0 on success, 2 on a domain verdict (a
/// diverged norm, a field outside a class, a failed precondition) and 1 on
/// usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orlicz::cli
