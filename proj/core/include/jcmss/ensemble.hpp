#pragma once

// Seeded inverse-temperature ensembles for the multi-level cavity state.
//
// The generator is pinned so sample files are reproducible everywhere:
//   * engine: std::mt19937_64 seeded with `seed` (its output sequence is fixed by the standard)
//   * uniform u in [0, 1): (engine() >> 11) * 2^-53
//   * normal: Box-Muller cosine branch, mean + sd * sqrt(-2 ln(1 - u1)) cos(2 pi u2)
//   * Weibull: inverse CDF, scale * (-ln(1 - u))^{1/shape}
// Non-positive draws are rejected and redrawn.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "jcmss/superstat.hpp"

namespace jcmss {

struct NormalShape {
  double mean = 3.0;
  double sd = 0.3;
};

struct WeibullShape {
  double scale = 0.0;  ///< 0 selects the scale that puts the mean at 3/omega
  double shape = 2.0;
};

struct BetaEnsembleSpec {
  std::variant<NormalShape, WeibullShape> shape = NormalShape{};
  std::size_t count = 100;
  std::uint64_t seed = 0;
  double omega = 1.0;

  /// Weibull with shape k and mean `mean`: scale = mean / Gamma(1 + 1/k).
  static WeibullShape weibull_with_mean(double mean, double shape);
};

/// Throws DomainError for invalid specs and RejectionOverflowError after 10^6
/// consecutive non-positive draws.
MultiLevelSuperstat sample_betas(const BetaEnsembleSpec& spec);

nlohmann::json to_json(const BetaEnsembleSpec& spec);
BetaEnsembleSpec spec_from_json(const nlohmann::json& j);

struct BetaSamples {
  BetaEnsembleSpec spec;
  MultiLevelSuperstat ensemble;
};

/// Line-oriented text: "# " + spec JSON, then one beta per line in shortest round-trip decimal.
std::string betas_text(const BetaEnsembleSpec& spec, const MultiLevelSuperstat& ensemble);

/// Line-oriented text: "# " + spec JSON, then one beta per line in shortest
/// round-trip decimal. Written to a temporary file and renamed into place.
void save_betas(const std::filesystem::path& path, const BetaEnsembleSpec& spec,
                const MultiLevelSuperstat& ensemble);

/// Throws ParseError naming the offending line on malformed or non-positive entries.
BetaSamples load_betas(const std::filesystem::path& path);

}  // namespace jcmss
