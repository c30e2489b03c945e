#pragma once

// Superstatistical initial states of the cavity mode (H_b = w a^dag a, E_n = n w).
//
// Two fluctuation models are provided: the gamma distribution of inverse
// temperatures, which yields q-exponential weights, and the N-level discrete
// distribution. The Gibbs state is the gamma model under Deformation::gibbs().

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "jcmss/specfun.hpp"

namespace jcmss {

/// Gamma-distributed inverse temperature, parameterised by the quasi-temperature beta*.
class GammaSuperstat {
public:
  /// Requires beta_star > 0, omega > 0 and, unless Gibbs, 1 < q < 2.
  GammaSuperstat(Deformation q, double beta_star, double omega = 1.0);

  Deformation q() const noexcept { return q_; }
  double beta_star() const noexcept { return beta_star_; }
  double omega() const noexcept { return omega_; }

  /// Shape c = 1/(q-1) of the underlying gamma density. Infinite under Gibbs.
  double gamma_shape() const noexcept;
  /// r = 1/((q-1) beta* w), the Hurwitz-zeta offset that appears in every closed form.
  double zeta_offset() const noexcept;

private:
  Deformation q_;
  double beta_star_;
  double omega_;
};

/// Uniform mixture of N Gibbs states at inverse temperatures beta_k.
class MultiLevelSuperstat {
public:
  MultiLevelSuperstat(std::vector<double> betas, double omega = 1.0);

  std::span<const double> betas() const noexcept { return betas_; }
  std::size_t size() const noexcept { return betas_.size(); }
  double omega() const noexcept { return omega_; }

private:
  std::vector<double> betas_;
  double omega_;
};

using CavityModel = std::variant<GammaSuperstat, MultiLevelSuperstat>;

enum class WeightSource : std::uint8_t { gamma, multilevel, gibbs };

/// Diagonal cavity weights p_0..p_{n_max} plus the exact probability beyond n_max.
struct PhotonDistribution {
  std::vector<double> weights;
  double tail_mass = 0.0;
  WeightSource source = WeightSource::gibbs;
  /// Set when the level cap was hit before tail_mass fell below the tolerance.
  bool tail_limited = false;

  std::size_t n_max() const noexcept { return weights.empty() ? 0 : weights.size() - 1; }
  /// Keeps p_0..p_n and folds the rest into tail_mass.
  PhotonDistribution truncated(std::size_t n) const;
};

struct Truncation {
  double tail_tol = 1e-8;
  std::size_t max_levels = 10'000'000;
};

PhotonDistribution photon_weights_gibbs(double beta, double omega, const Truncation& trunc = {});
PhotonDistribution photon_weights_gamma(const GammaSuperstat& s, const Truncation& trunc = {});
PhotonDistribution photon_weights_multilevel(const MultiLevelSuperstat& s,
                                             const Truncation& trunc = {});
PhotonDistribution photon_weights(const CavityModel& model, const Truncation& trunc = {});

/// Super-partition function Z_N = sum_k 1/(1 - e^{-beta_k w}).
double multilevel_partition(const MultiLevelSuperstat& s);

/// Z = Tr[exp_q(-beta* H_b)].
double q_partition(const GammaSuperstat& s);

/// Tr[varrho^q] for the normalised auxiliary state varrho = exp_q(-beta* H_b) / Z.
double q_trace(const GammaSuperstat& s);

/// U = Tr[varrho^q H_b] = -d/dbeta* ln_q Z.
double q_internal_energy(const GammaSuperstat& s);

/// Physical inverse temperature beta obtained from beta*.
/// Throws UndefinedTemperatureError if the map's denominator is not positive.
double physical_beta(const GammaSuperstat& s);

/// Inverse of physical_beta in beta*. Throws NoBracketError if beta_target is not
/// attained for beta* w in [1e-3, 1e3].
double calibrate_beta_star(Deformation q, double beta_target, double omega = 1.0);

/// q-weighted photon number Tr[varrho^q n] / Tr[varrho^q].
double mean_photon_q(const GammaSuperstat& s);

/// Bose-Einstein occupation 1/(e^{beta w} - 1).
double mean_photon_bose(double beta, double omega = 1.0);

}  // namespace jcmss
