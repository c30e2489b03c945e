#include "jcmss/superstat.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>

#include "jcmss/errors.hpp"

namespace jcmss {

namespace {

// Scaled zetas here are >= 1, so this is a relative accuracy near machine precision.
constexpr SeriesAccuracy kTightZeta{1e-15, 10'000'000, TailMethod::euler_maclaurin};

constexpr double kScanLow = 1e-3;
constexpr double kScanHigh = 1e3;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " +
                      std::to_string(value));
  }
}

// Smallest n_max in [0, max_levels) with tail(n_max) <= tol; tail must be non-increasing.
template <class TailFn>
std::pair<std::size_t, bool> choose_cutoff(TailFn&& tail, double tol, std::size_t max_levels) {
  if (max_levels < 1) throw DomainError("Truncation::max_levels must be >= 1");
  const std::size_t last = max_levels - 1;
  if (tail(0) <= tol) return {0, false};
  std::size_t lo = 0;  // tail(lo) > tol
  std::size_t hi = std::min<std::size_t>(1, last);
  while (hi < last && tail(hi) > tol) {
    lo = hi;
    hi = std::min(2 * hi + 1, last);
  }
  if (tail(hi) > tol) return {hi, true};
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (tail(mid) <= tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, false};
}

void check_truncation(const Truncation& trunc) {
  if (!(trunc.tail_tol > 0.0 && trunc.tail_tol < 1.0)) {
    throw DomainError("tail tolerance must lie in (0, 1), got " + std::to_string(trunc.tail_tol));
  }
  if (trunc.max_levels < 1) throw DomainError("Truncation::max_levels must be >= 1");
}

// Quantities shared by the q-deformed closed forms.
struct QMoments {
  double partition;     // Z = r^c zeta_H(c, r)
  double trace_unnorm;  // r^{cq} zeta_H(cq, r)
  double offset;        // r
};

QMoments q_moments(const GammaSuperstat& s) {
  const double c = s.gamma_shape();
  const double r = s.zeta_offset();
  return {hurwitz_zeta_scaled(c, r, kTightZeta), hurwitz_zeta_scaled(c + 1.0, r, kTightZeta), r};
}

}  // namespace

GammaSuperstat::GammaSuperstat(Deformation q, double beta_star, double omega)
    : q_(q), beta_star_(beta_star), omega_(omega) {
  require_positive(beta_star, "beta*");
  require_positive(omega, "omega");
  if (!q.is_gibbs() && !(q.q() > 1.0 && q.q() < 2.0)) {
    throw DomainError("gamma superstatistics requires 1 < q < 2, got q = " + std::to_string(q.q()));
  }
}

double GammaSuperstat::gamma_shape() const noexcept {
  return q_.is_gibbs() ? INFINITY : 1.0 / (q_.q() - 1.0);
}

double GammaSuperstat::zeta_offset() const noexcept {
  return q_.is_gibbs() ? INFINITY : 1.0 / ((q_.q() - 1.0) * beta_star_ * omega_);
}

MultiLevelSuperstat::MultiLevelSuperstat(std::vector<double> betas, double omega)
    : betas_(std::move(betas)), omega_(omega) {
  require_positive(omega, "omega");
  if (betas_.empty()) throw DomainError("multi-level superstatistics needs at least one beta");
  for (std::size_t k = 0; k < betas_.size(); ++k) {
    if (!(betas_[k] > 0.0) || !std::isfinite(betas_[k])) {
      throw DomainError("beta[" + std::to_string(k) + "] must be positive, got " +
                        std::to_string(betas_[k]));
    }
  }
}

PhotonDistribution PhotonDistribution::truncated(std::size_t n) const {
  if (n >= n_max()) return *this;
  PhotonDistribution out;
  out.source = source;
  out.tail_limited = tail_limited;
  out.weights.assign(weights.begin(), weights.begin() + static_cast<std::ptrdiff_t>(n + 1));
  // Sum the dropped weights smallest-first.
  double dropped = tail_mass;
  for (std::size_t i = weights.size(); i-- > n + 1;) dropped += weights[i];
  out.tail_mass = dropped;
  return out;
}

PhotonDistribution photon_weights_gibbs(double beta, double omega, const Truncation& trunc) {
  require_positive(beta, "beta");
  require_positive(omega, "omega");
  check_truncation(trunc);
  const double x = beta * omega;
  auto tail = [x](std::size_t n) { return std::exp(-static_cast<double>(n + 1) * x); };
  const auto [n_max, limited] = choose_cutoff(tail, trunc.tail_tol, trunc.max_levels);

  PhotonDistribution d;
  d.source = WeightSource::gibbs;
  d.tail_limited = limited;
  d.weights.resize(n_max + 1);
  const double norm = -std::expm1(-x);
  for (std::size_t n = 0; n <= n_max; ++n) {
    d.weights[n] = norm * std::exp(-static_cast<double>(n) * x);
  }
  d.tail_mass = tail(n_max);
  return d;
}

PhotonDistribution photon_weights_gamma(const GammaSuperstat& s, const Truncation& trunc) {
  if (s.q().is_gibbs()) return photon_weights_gibbs(s.beta_star(), s.omega(), trunc);
  check_truncation(trunc);

  const double c = s.gamma_shape();
  const double r = s.zeta_offset();
  const double partition = hurwitz_zeta_scaled(c, r, kTightZeta);
  // Tail beyond n: ((n+1+r)/r)^{-c} zeta~(c, n+1+r) / zeta~(c, r), exact in closed form.
  auto tail = [&](std::size_t n) {
    const double shift = static_cast<double>(n + 1);
    const double lead = std::exp(-c * std::log1p(shift / r));
    return lead * hurwitz_zeta_scaled(c, r + shift, kTightZeta) / partition;
  };
  const auto [n_max, limited] = choose_cutoff(tail, trunc.tail_tol, trunc.max_levels);

  PhotonDistribution d;
  d.source = WeightSource::gamma;
  d.tail_limited = limited;
  d.weights.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    d.weights[n] = std::exp(-c * std::log1p(static_cast<double>(n) / r)) / partition;
  }
  d.tail_mass = tail(n_max);
  return d;
}

double multilevel_partition(const MultiLevelSuperstat& s) {
  double z = 0.0;
  for (double beta : s.betas()) z += 1.0 / -std::expm1(-beta * s.omega());
  return z;
}

PhotonDistribution photon_weights_multilevel(const MultiLevelSuperstat& s,
                                             const Truncation& trunc) {
  check_truncation(trunc);
  const double z = multilevel_partition(s);
  const double omega = s.omega();
  auto tail = [&](std::size_t n) {
    double t = 0.0;
    for (double beta : s.betas()) {
      const double x = beta * omega;
      t += std::exp(-static_cast<double>(n + 1) * x) / -std::expm1(-x);
    }
    return t / z;
  };
  const auto [n_max, limited] = choose_cutoff(tail, trunc.tail_tol, trunc.max_levels);

  PhotonDistribution d;
  d.source = WeightSource::multilevel;
  d.tail_limited = limited;
  d.weights.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    double p = 0.0;
    for (double beta : s.betas()) p += std::exp(-static_cast<double>(n) * beta * omega);
    d.weights[n] = p / z;
  }
  d.tail_mass = tail(n_max);
  return d;
}

PhotonDistribution photon_weights(const CavityModel& model, const Truncation& trunc) {
  return std::visit(
      [&](const auto& m) -> PhotonDistribution {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GammaSuperstat>) {
          return photon_weights_gamma(m, trunc);
        } else {
          return photon_weights_multilevel(m, trunc);
        }
      },
      model);
}

double q_partition(const GammaSuperstat& s) {
  if (s.q().is_gibbs()) return 1.0 / -std::expm1(-s.beta_star() * s.omega());
  return hurwitz_zeta_scaled(s.gamma_shape(), s.zeta_offset(), kTightZeta);
}

double q_trace(const GammaSuperstat& s) {
  if (s.q().is_gibbs()) return 1.0;
  const QMoments m = q_moments(s);
  return m.trace_unnorm / std::pow(m.partition, s.q().q());
}

double q_internal_energy(const GammaSuperstat& s) {
  if (s.q().is_gibbs()) return s.omega() * mean_photon_bose(s.beta_star(), s.omega());
  // w sum_n n (1 + n/r)^{-cq} / Z^q, with sum_n n (1 + n/r)^{-cq} = r [zeta~(c) - zeta~(c+1)].
  const QMoments m = q_moments(s);
  const double weighted = m.offset * (m.partition - m.trace_unnorm);
  return s.omega() * weighted / std::pow(m.partition, s.q().q());
}

double physical_beta(const GammaSuperstat& s) {
  if (s.q().is_gibbs()) return s.beta_star();
  const double q = s.q().q();
  const double trace = q_trace(s);
  const double energy = q_internal_energy(s);
  const double denom = 1.0 - (1.0 - q) * s.beta_star() * energy / trace;
  if (!(denom > 0.0)) {
    throw UndefinedTemperatureError("physical temperature undefined at q = " + std::to_string(q) +
                                    ", beta* = " + std::to_string(s.beta_star()));
  }
  return s.beta_star() * trace / denom;
}

double calibrate_beta_star(Deformation q, double beta_target, double omega) {
  require_positive(beta_target, "target beta");
  require_positive(omega, "omega");
  if (q.is_gibbs()) return beta_target;

  const double log_target = std::log(beta_target);
  auto mismatch = [&](double log_beta_star) {
    return std::log(physical_beta(GammaSuperstat(q, std::exp(log_beta_star), omega))) - log_target;
  };

  // Decade scan for a sign change of the monotone map.
  const double u_low = std::log(kScanLow / omega);
  const double u_high = std::log(kScanHigh / omega);
  const double step = std::log(10.0);
  double a = u_low;
  double fa = mismatch(a);
  if (fa == 0.0) return std::exp(a);
  for (double b = a + step; b <= u_high + 1e-9; b += step) {
    const double fb = mismatch(b);
    if (fb == 0.0) return std::exp(b);
    if ((fa < 0.0) != (fb < 0.0)) {
      std::uintmax_t max_iter = 200;
      auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-14; };
      const auto [lo, hi] = boost::math::tools::toms748_solve(mismatch, a, b, fa, fb, tol, max_iter);
      return std::exp(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  throw NoBracketError("target beta = " + std::to_string(beta_target) +
                       " is not attained for beta* w in [1e-3, 1e3] at q = " +
                       std::to_string(q.q()));
}

double mean_photon_q(const GammaSuperstat& s) {
  if (s.q().is_gibbs()) return mean_photon_bose(s.beta_star(), s.omega());
  // [Phi(1, c, r) - r Phi(1, c+1, r)] / zeta_H(c+1, r), evaluated with the r^s-scaled sums
  // so that q close to 1 (huge c) does not underflow.
  const QMoments m = q_moments(s);
  return m.offset * (m.partition - m.trace_unnorm) / m.trace_unnorm;
}

double mean_photon_bose(double beta, double omega) {
  const double x = beta * omega;
  if (!(x > 0.0)) throw DomainError("mean_photon_bose requires beta * omega > 0");
  return 1.0 / std::expm1(x);
}

}  // namespace jcmss
