#pragma once

// Resonant and detuned Jaynes-Cummings dynamics for a diagonal initial state
// rho(0) = rho_a(0) (x) rho_b(0), in units hbar = 1.
//
// The joint state stays block diagonal in {|g,0>} + {|e,n>, |g,n+1>}. Each
// manifold n is described by the real populations A_n, C_n and the coherence
// B_n. Only manifolds 0..n_max-1 of the truncated input distribution are
// evolved; the unpaired |e,n_max> population and the distribution's tail mass
// are carried as frozen, time-independent weights.

#include <complex>
#include <cstddef>
#include <vector>

#include "jcmss/superstat.hpp"

namespace jcmss {

class ModelParams {
public:
  /// Requires omega > 0 and finite omega0, lambda.
  ModelParams(double omega0, double omega, double lambda);
  static ModelParams from_detuning(double delta, double lambda, double omega = 1.0);

  double omega0() const noexcept { return omega0_; }
  double omega() const noexcept { return omega_; }
  double lambda() const noexcept { return lambda_; }
  /// Delta = omega0 - omega.
  double delta() const noexcept { return omega0_ - omega_; }

private:
  double omega0_;
  double omega_;
  double lambda_;
};

/// rho_a(0) = eps |e><e| + (1 - eps) |g><g|.
class AtomInit {
public:
  explicit AtomInit(double epsilon);
  double epsilon() const noexcept { return epsilon_; }

private:
  double epsilon_;
};

struct ManifoldQuantities {
  std::size_t n = 0;
  double delta_n = 0.0;      ///< generalised Rabi frequency sqrt(Delta^2 + lambda^2 (n+1))
  double omega_plus = 0.0;   ///< (Delta + delta_n) / (lambda sqrt(n+1))
  double omega_minus = 0.0;  ///< (Delta - delta_n) / (lambda sqrt(n+1))
};

/// Throws DomainError when lambda == 0 (the mixing ratios are undefined).
ManifoldQuantities manifold(const ModelParams& params, std::size_t n);

struct EvolvedState {
  double time = 0.0;
  std::vector<double> coeff_A;
  std::vector<std::complex<double>> coeff_B;
  std::vector<double> coeff_C;
  double uncoupled_weight = 0.0;  ///< p_0 (1 - eps) on |g,0>
  double frozen_excited = 0.0;    ///< eps (p_{n_max} + tail)
  double frozen_ground = 0.0;     ///< (1 - eps) tail
  double tail_mass = 0.0;         ///< probability beyond n_max in the input distribution
  /// Frozen eps p_{n_max} on |e,n_max>, already included in frozen_excited.
  double top_level_excited = 0.0;
  std::size_t n_max = 0;
};

/// Precomputes the time-independent part of every manifold so that repeated
/// evaluation on a time grid costs one cos/sin per manifold.
class Evolution {
public:
  Evolution(const ModelParams& params, const AtomInit& atom, const PhotonDistribution& dist);

  EvolvedState at(double t) const;
  /// Overwrites `out`, reusing its storage.
  void evaluate(double t, EvolvedState& out) const;

  std::size_t manifold_count() const noexcept { return manifolds_.size(); }

private:
  struct Manifold {
    double delta_n;
    double omega_plus;
    double omega_minus;
    double k_plus;   // [eps p_n + (1-eps) O+^2 p_{n+1}] / (1 + O+^2)^2
    double k_minus;  // [eps p_n + (1-eps) O-^2 p_{n+1}] / (1 + O-^2)^2
    double k_cross;  // [eps p_n + (1-eps) O+ O- p_{n+1}] / ((1 + O+^2)(1 + O-^2))
    double initial_a; // A_n(0)
    double initial_c; // C_n(0)
    double transfer; // 4 / ((1 + O+^2)(1 + O-^2)), peak fraction exchanged
  };

  bool coupled_;
  std::vector<Manifold> manifolds_;
  double uncoupled_weight_;
  double frozen_excited_;
  double frozen_ground_;
  double top_level_excited_;
  double tail_mass_;
  std::size_t n_max_;
};

EvolvedState coefficients_at(const ModelParams& params, const AtomInit& atom,
                             const PhotonDistribution& dist, double t);

struct AtomPopulations {
  double excited = 0.0;
  double ground = 0.0;
};

AtomPopulations reduced_atom(const EvolvedState& state);

/// Diagonal of rho_b(t) over 0..n_max; `tail_mass` is the frozen probability beyond.
struct FieldPopulations {
  std::vector<double> weights;
  double tail_mass = 0.0;
};

FieldPopulations reduced_field(const EvolvedState& state);

/// Result of the brute-force evolution. Coherences are <e,n|rho(t)|g,n+1> of
/// the evolved density matrix.
struct OracleResult {
  AtomPopulations atom;
  FieldPopulations field;
  std::vector<double> coeff_A;
  std::vector<std::complex<double>> coherence;
  std::vector<double> coeff_C;
  /// Largest |off-diagonal| of rho_b(t); zero up to rounding for diagonal inputs.
  double field_offdiag_max = 0.0;
  /// Probability of the input beyond n_cut (not represented in the basis).
  double unrepresented_mass = 0.0;
  bool cutoff_warning = false;
};

/// Dense evolution on the truncated product basis |a, n>, n <= n_cut, by exact
/// diagonalisation of the Hamiltonian built from its operator definition.
/// The unrepresented mass is split eps / (1 - eps) between the atom sectors,
/// the same bookkeeping as the analytic path, so results compare directly.
OracleResult oracle_evolve(const ModelParams& params, const AtomInit& atom,
                           const PhotonDistribution& dist, double t, std::size_t n_cut,
                           double warn_tol = 1e-10);

}  // namespace jcmss
