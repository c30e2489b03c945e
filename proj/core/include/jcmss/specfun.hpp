#pragma once

// Deformed exponential algebra and the Hurwitz zeta family.
//
// The q-deformed functions accept any finite q != 1. The q -> 1 limit is never
// reached by plugging q = 1 into a deformed formula; it is requested explicitly
// with Deformation::gibbs().

#include <cstddef>
#include <cstdint>

namespace jcmss {

/// Deformation index q, or the explicit Gibbs (q -> 1) flag.
class Deformation {
public:
  static Deformation gibbs() noexcept { return Deformation{}; }
  /// Throws DomainError for q == 1 or non-finite q.
  static Deformation tsallis(double q);
  /// q == 1 maps to gibbs(); anything else to tsallis(q).
  static Deformation from_value(double q);

  bool is_gibbs() const noexcept { return gibbs_; }
  /// 1.0 under the Gibbs flag.
  double q() const noexcept { return q_; }

  friend bool operator==(const Deformation&, const Deformation&) = default;

private:
  Deformation() = default;
  bool gibbs_ = true;
  double q_ = 1.0;
};

enum class TailMethod : std::uint8_t { euler_maclaurin, closed_form_zeta, plain_truncation };

struct SeriesAccuracy {
  double abs_tol = 1e-10;
  std::size_t max_terms = 10'000'000;
  TailMethod tail_method = TailMethod::euler_maclaurin;
};

/// e_q^x = [1 + (1-q) x]^{1/(1-q)}, with the Tsallis cutoff (0 outside the support).
double q_exp(double x, Deformation q) noexcept;

/// ln_q x = (x^{1-q} - 1) / (1-q). Throws DomainError for x <= 0.
double q_log(double x, Deformation q);

/// Hurwitz zeta sum_{n>=0} (n + x)^{-s} for s > 1, x > 0.
double hurwitz_zeta(double s, double x, const SeriesAccuracy& acc = {});

/// x^s * zeta_H(s, x) = sum_{n>=0} (1 + n/x)^{-s}. Always >= 1 and free of
/// under/overflow for large s, which the q -> 1 regime needs (s = 1/(q-1)).
/// abs_tol applies to the scaled value.
double hurwitz_zeta_scaled(double s, double x, const SeriesAccuracy& acc = {});

/// Hurwitz-Lerch transcendent Phi(z, s, r) at z = 1.
double lerch_phi_unit(double s, double r, const SeriesAccuracy& acc = {});

}  // namespace jcmss
