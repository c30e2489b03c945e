#include "jcmss/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "jcmss/errors.hpp"
#include "numeric_utils.hpp"

namespace jcmss {

Deformation Deformation::tsallis(double q) {
  if (!std::isfinite(q) || q == 1.0) {
    throw DomainError("deformation index must be finite and != 1 (use Deformation::gibbs()), got " +
                      std::to_string(q));
  }
  Deformation d;
  d.gibbs_ = false;
  d.q_ = q;
  return d;
}

Deformation Deformation::from_value(double q) {
  return q == 1.0 ? gibbs() : tsallis(q);
}

double q_exp(double x, Deformation q) noexcept {
  if (q.is_gibbs()) return std::exp(x);
  const double one_minus_q = 1.0 - q.q();
  const double base = 1.0 + one_minus_q * x;
  if (base <= 0.0) return 0.0;
  return std::exp(std::log1p(one_minus_q * x) / one_minus_q);
}

double q_log(double x, Deformation q) {
  if (!(x > 0.0)) throw DomainError("q_log requires x > 0, got " + std::to_string(x));
  if (q.is_gibbs()) return std::log(x);
  const double one_minus_q = 1.0 - q.q();
  return std::expm1(one_minus_q * std::log(x)) / one_minus_q;
}

namespace {

// B_{2k} / (2k)! for k = 1..12.
constexpr std::array<double, 12> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
    854513.0 / 138.0 / 1.1240007277776077e21,
    -236364091.0 / 2730.0 / 6.204484017332394e23,
};

constexpr std::size_t kFirstCheckpoint = 8;

void check_zeta_args(double s, double x) {
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw DomainError("Hurwitz zeta requires s > 1, got s = " + std::to_string(s));
  }
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("Hurwitz zeta requires x > 0, got x = " + std::to_string(x));
  }
}

// (1 + n/x)^{-s}
inline double scaled_term(double s, double x, double n) {
  return std::exp(-s * std::log1p(n / x));
}

struct TailEstimate {
  double value;
  double error;
};

// sum_{n>=N} (1 + n/x)^{-s} by Euler-Maclaurin around y = x + N.
TailEstimate euler_maclaurin_tail(double s, double x, std::size_t n_head) {
  const double n = static_cast<double>(n_head);
  const double y = x + n;
  const double f_n = scaled_term(s, x, n);
  if (f_n == 0.0) return {0.0, 0.0};

  double tail = f_n * y / (s - 1.0) + 0.5 * f_n;
  // Correction k uses (s)_{2k-1} / y^{2k-1}.
  double rising = s;
  double ypow = y;
  double last = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    const double term = kBernoulliOverFactorial[k] * rising / ypow * f_n;
    if (std::abs(term) >= last) break;  // asymptotic series started to diverge
    tail += term;
    last = std::abs(term);
    const double m = static_cast<double>(2 * k + 1);
    rising *= (s + m) * (s + m + 1.0);
    ypow *= y * y;
  }
  return {tail, last};
}

// Rigorous bound on sum_{n>=N} f(n) for the decreasing summand: f(N) + int_N^inf f.
double plain_tail_bound(double s, double x, std::size_t n_head) {
  const double n = static_cast<double>(n_head);
  const double f_n = scaled_term(s, x, n);
  return f_n + f_n * (x + n) / (s - 1.0);
}

}  // namespace

double hurwitz_zeta_scaled(double s, double x, const SeriesAccuracy& acc) {
  check_zeta_args(s, x);
  if (!(acc.abs_tol > 0.0) || acc.max_terms < 1) {
    throw DomainError("SeriesAccuracy requires abs_tol > 0 and max_terms >= 1");
  }

  detail::CompensatedSum head;
  std::size_t n = 0;
  std::size_t checkpoint = std::min(kFirstCheckpoint, acc.max_terms);
  double last_error = std::numeric_limits<double>::infinity();
  for (;;) {
    for (; n < checkpoint; ++n) head += scaled_term(s, x, static_cast<double>(n));

    if (acc.tail_method == TailMethod::plain_truncation) {
      last_error = plain_tail_bound(s, x, n);
      if (last_error <= acc.abs_tol) return head.value();
    } else {
      const TailEstimate tail = euler_maclaurin_tail(s, x, n);
      last_error = tail.error;
      if (tail.error <= acc.abs_tol) return head.value() + tail.value;
    }

    if (checkpoint >= acc.max_terms) break;
    checkpoint = std::min(checkpoint * 2, acc.max_terms);
  }
  throw AccuracyError("Hurwitz zeta(s=" + std::to_string(s) + ", x=" + std::to_string(x) +
                      ") did not reach abs_tol " + std::to_string(acc.abs_tol) + " within " +
                      std::to_string(acc.max_terms) + " terms (tail error " +
                      std::to_string(last_error) + ")");
}

double hurwitz_zeta(double s, double x, const SeriesAccuracy& acc) {
  check_zeta_args(s, x);
  const double scale = std::exp(-s * std::log(x));  // x^{-s}
  SeriesAccuracy scaled_acc = acc;
  scaled_acc.abs_tol = scale > 0.0 ? acc.abs_tol / scale : std::numeric_limits<double>::infinity();
  return scale * hurwitz_zeta_scaled(s, x, scaled_acc);
}

double lerch_phi_unit(double s, double r, const SeriesAccuracy& acc) {
  // Phi(1, s, r) = sum z^n / (n + r)^s at z = 1 is zeta_H(s, r).
  return hurwitz_zeta(s, r, acc);
}

}  // namespace jcmss
