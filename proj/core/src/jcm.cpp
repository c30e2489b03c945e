#include "jcmss/jcm.hpp"

#include <cmath>
#include <string>

#include "jcmss/errors.hpp"
#include "numeric_utils.hpp"

namespace jcmss {

ModelParams::ModelParams(double omega0, double omega, double lambda)
    : omega0_(omega0), omega_(omega), lambda_(lambda) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("cavity frequency must be positive, got " + std::to_string(omega));
  }
  if (!std::isfinite(omega0) || !std::isfinite(lambda)) {
    throw DomainError("omega0 and lambda must be finite");
  }
}

ModelParams ModelParams::from_detuning(double delta, double lambda, double omega) {
  return ModelParams(omega + delta, omega, lambda);
}

AtomInit::AtomInit(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw DomainError("atom excited weight must lie in [0, 1], got " + std::to_string(epsilon));
  }
}

ManifoldQuantities manifold(const ModelParams& params, std::size_t n) {
  const double coupling = params.lambda() * std::sqrt(static_cast<double>(n + 1));
  if (coupling == 0.0) {
    throw DomainError("dressed-state mixing ratios are undefined for lambda = 0");
  }
  const double delta = params.delta();
  ManifoldQuantities m;
  m.n = n;
  m.delta_n = std::hypot(delta, coupling);
  // Evaluate the ratio without cancellation first; the other follows from O+ O- = -1.
  if (delta >= 0.0) {
    m.omega_plus = (delta + m.delta_n) / coupling;
    m.omega_minus = -1.0 / m.omega_plus;
  } else {
    m.omega_minus = (delta - m.delta_n) / coupling;
    m.omega_plus = -1.0 / m.omega_minus;
  }
  return m;
}

Evolution::Evolution(const ModelParams& params, const AtomInit& atom,
                     const PhotonDistribution& dist)
    : coupled_(params.lambda() != 0.0) {
  if (dist.weights.empty()) throw DomainError("photon distribution has no weights");
  const double eps = atom.epsilon();
  const auto& p = dist.weights;
  n_max_ = dist.n_max();
  tail_mass_ = dist.tail_mass;
  uncoupled_weight_ = p[0] * (1.0 - eps);
  top_level_excited_ = eps * p[n_max_];
  frozen_excited_ = eps * (p[n_max_] + dist.tail_mass);
  frozen_ground_ = (1.0 - eps) * dist.tail_mass;

  manifolds_.resize(n_max_);
  for (std::size_t n = 0; n < n_max_; ++n) {
    Manifold& m = manifolds_[n];
    const double excited = eps * p[n];
    const double ground = (1.0 - eps) * p[n + 1];
    m.initial_a = excited;
    m.initial_c = ground;
    if (!coupled_) {
      m = Manifold{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, excited, ground, 0.0};
      continue;
    }
    const ManifoldQuantities q = manifold(params, n);
    const double op = q.omega_plus;
    const double om = q.omega_minus;
    const double np = 1.0 + op * op;
    const double nm = 1.0 + om * om;
    m.delta_n = q.delta_n;
    m.omega_plus = op;
    m.omega_minus = om;
    m.k_plus = (excited + ground * op * op) / (np * np);
    m.k_minus = (excited + ground * om * om) / (nm * nm);
    m.k_cross = (excited + ground * op * om) / (np * nm);
    m.transfer = 4.0 / (np * nm);
  }
}

void Evolution::evaluate(double t, EvolvedState& out) const {
  const std::size_t count = manifolds_.size();
  out.time = t;
  out.coeff_A.resize(count);
  out.coeff_B.resize(count);
  out.coeff_C.resize(count);
  out.uncoupled_weight = uncoupled_weight_;
  out.frozen_excited = frozen_excited_;
  out.frozen_ground = frozen_ground_;
  out.top_level_excited = top_level_excited_;
  out.tail_mass = tail_mass_;
  out.n_max = n_max_;

  if (!coupled_) {
    for (std::size_t n = 0; n < count; ++n) {
      out.coeff_A[n] = manifolds_[n].initial_a;
      out.coeff_B[n] = 0.0;
      out.coeff_C[n] = manifolds_[n].initial_c;
    }
    return;
  }

  for (std::size_t n = 0; n < count; ++n) {
    const Manifold& m = manifolds_[n];
    const double phase = m.delta_n * t;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double op = m.omega_plus;
    const double om = m.omega_minus;
    // k_+ + k_- + 2 k_x cos written as a population exchange, exact at t = 0
    const double half = std::sin(0.5 * phase);
    const double moved = (m.initial_a - m.initial_c) * m.transfer * half * half;
    out.coeff_A[n] = m.initial_a - moved;
    out.coeff_C[n] = m.initial_c + moved;
    // O+ e^{i delta_n t} + O- e^{-i delta_n t}
    const std::complex<double> rotating((op + om) * c, (op - om) * s);
    out.coeff_B[n] = op * m.k_plus + om * m.k_minus + m.k_cross * rotating;
  }
}

EvolvedState Evolution::at(double t) const {
  EvolvedState out;
  evaluate(t, out);
  return out;
}

EvolvedState coefficients_at(const ModelParams& params, const AtomInit& atom,
                             const PhotonDistribution& dist, double t) {
  return Evolution(params, atom, dist).at(t);
}

AtomPopulations reduced_atom(const EvolvedState& state) {
  detail::CompensatedSum excited;
  detail::CompensatedSum ground;
  for (double a : state.coeff_A) excited += a;
  for (double c : state.coeff_C) ground += c;
  excited += state.frozen_excited;
  ground += state.uncoupled_weight;
  ground += state.frozen_ground;
  return {excited.value(), ground.value()};
}

FieldPopulations reduced_field(const EvolvedState& state) {
  const std::size_t count = state.coeff_A.size();  // == n_max
  FieldPopulations f;
  f.tail_mass = state.tail_mass;
  f.weights.resize(state.n_max + 1);
  f.weights[0] = state.uncoupled_weight + (count > 0 ? state.coeff_A[0] : state.top_level_excited);
  for (std::size_t n = 1; n < count; ++n) f.weights[n] = state.coeff_A[n] + state.coeff_C[n - 1];
  if (count > 0) f.weights[count] = state.top_level_excited + state.coeff_C[count - 1];
  return f;
}

}  // namespace jcmss
