#include "jcmss/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <thread>

#include "jcmss/errors.hpp"
#include "numeric_utils.hpp"

namespace jcmss {

namespace {

constexpr double kNegativeSlack = 1e-12;
constexpr double kTotalSlack = 1e-10;

// -p ln p or -p ln_q p, with 0 ln 0 = 0.
inline double entropy_term(double p, EntropyKind kind) {
  if (p <= 0.0) return 0.0;
  const double log_p = std::log(p);
  if (!kind.is_tsallis()) return -p * log_p;
  const double one_minus_q = 1.0 - kind.deformation().q();
  return -p * std::expm1(one_minus_q * log_p) / one_minus_q;
}

void check_probability(double p, std::size_t index) {
  if (p < -kNegativeSlack || std::isnan(p)) {
    throw DomainError("probability entry " + std::to_string(index) + " is negative: " +
                      std::to_string(p));
  }
}

double coarse_field_entropy(const EvolvedState& state, EntropyKind kind) {
  const std::size_t count = state.coeff_A.size();
  const double vacuum =
      state.uncoupled_weight + (count > 0 ? state.coeff_A[0] : state.top_level_excited);
  detail::CompensatedSum excited_levels;
  for (std::size_t n = 1; n < count; ++n) excited_levels += state.coeff_A[n];
  for (double c : state.coeff_C) excited_levels += c;
  if (count > 0) excited_levels += state.top_level_excited;
  excited_levels += state.tail_mass;
  const double pair[2] = {vacuum, excited_levels.value()};
  return entropy_of(pair, kind);
}

double full_field_entropy(const EvolvedState& state, EntropyKind kind) {
  const std::size_t count = state.coeff_A.size();
  detail::CompensatedSum total;
  detail::CompensatedSum entropy;
  auto add = [&](double w, std::size_t n) {
    check_probability(w, n);
    total += w;
    entropy += entropy_term(w, kind);
  };
  add(state.uncoupled_weight + (count > 0 ? state.coeff_A[0] : state.top_level_excited), 0);
  for (std::size_t n = 1; n < count; ++n) add(state.coeff_A[n] + state.coeff_C[n - 1], n);
  if (count > 0) add(state.top_level_excited + state.coeff_C[count - 1], count);
  if (total.value() > 1.0 + kTotalSlack) {
    throw DomainError("field populations sum to " + std::to_string(total.value()) + " > 1");
  }
  return entropy.value();
}

template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    if (begin < end) pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

bool is_uniform_step(double step, double reference) {
  return std::abs(step - reference) <= 1e-9 * std::abs(reference);
}

// Composite Simpson (with a 3/8 closing panel for odd interval counts) over the
// leading uniform run of points; trapezoid over any remaining intervals.
double integrate_samples(std::span<const double> t, std::span<const double> y) {
  const std::size_t points = t.size();
  if (points < 2) return 0.0;
  const double h = t[1] - t[0];
  std::size_t uniform_end = 1;  // index of the last point of the uniform run
  while (uniform_end + 1 < points && is_uniform_step(t[uniform_end + 1] - t[uniform_end], h)) {
    ++uniform_end;
  }

  detail::CompensatedSum integral;
  const std::size_t intervals = uniform_end;
  std::size_t simpson_intervals = intervals;
  if (intervals == 1) {
    simpson_intervals = 0;
    integral += 0.5 * h * (y[0] + y[1]);
  } else if (intervals % 2 == 1) {
    simpson_intervals = intervals - 3;
    const std::size_t k = simpson_intervals;
    integral += 3.0 * h / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]);
  }
  for (std::size_t i = 0; i + 2 <= simpson_intervals; i += 2) {
    integral += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  }
  for (std::size_t i = uniform_end; i + 1 < points; ++i) {
    integral += 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
  }
  return integral.value();
}

// Points of (t, y) on [0, T], with a linearly interpolated endpoint when T falls between samples.
void clip_to_window(std::span<const double> t, std::span<const double> y, double duration,
                    std::vector<double>& t_out, std::vector<double>& y_out) {
  t_out.clear();
  y_out.clear();
  const double slack = 1e-12 * std::max(1.0, duration);
  std::size_t i = 0;
  for (; i < t.size() && t[i] <= duration + slack; ++i) {
    t_out.push_back(t[i]);
    y_out.push_back(y[i]);
  }
  if (i < t.size() && t_out.back() < duration - slack) {
    const double frac = (duration - t[i - 1]) / (t[i] - t[i - 1]);
    t_out.push_back(duration);
    y_out.push_back(y[i - 1] + frac * (y[i] - y[i - 1]));
  }
}

double window_mean(std::span<const double> t, std::span<const double> y, double duration) {
  std::vector<double> tc;
  std::vector<double> yc;
  clip_to_window(t, y, duration, tc, yc);
  return integrate_samples(tc, yc) / duration;
}

double half_grid_mean(std::span<const double> t, std::span<const double> y, double duration) {
  std::vector<double> tc;
  std::vector<double> yc;
  clip_to_window(t, y, duration, tc, yc);
  std::vector<double> th;
  std::vector<double> yh;
  for (std::size_t i = 0; i < tc.size(); i += 2) {
    th.push_back(tc[i]);
    yh.push_back(yc[i]);
  }
  if ((tc.size() - 1) % 2 == 1) {
    th.push_back(tc.back());
    yh.push_back(yc.back());
  }
  return integrate_samples(th, yh) / duration;
}

}  // namespace

EntropyKind EntropyKind::tsallis(double q) {
  if (!(q > 1.0 && q < 2.0)) {
    throw DomainError("Tsallis entropy index must satisfy 1 < q < 2, got " + std::to_string(q));
  }
  EntropyKind k;
  k.deformation_ = Deformation::tsallis(q);
  return k;
}

EntropyKind default_entropy_kind(const CavityModel& model) {
  if (const auto* gamma = std::get_if<GammaSuperstat>(&model)) {
    if (!gamma->q().is_gibbs()) return EntropyKind::tsallis(gamma->q().q());
  }
  return EntropyKind::von_neumann();
}

double entropy_of(std::span<const double> p, EntropyKind kind) {
  detail::CompensatedSum total;
  detail::CompensatedSum entropy;
  for (std::size_t i = 0; i < p.size(); ++i) {
    check_probability(p[i], i);
    total += p[i];
    entropy += entropy_term(p[i], kind);
  }
  if (total.value() > 1.0 + kTotalSlack) {
    throw DomainError("probabilities sum to " + std::to_string(total.value()) + " > 1");
  }
  return entropy.value();
}

double atom_entropy(const EvolvedState& state, EntropyKind kind) {
  const AtomPopulations pops = reduced_atom(state);
  const double pair[2] = {pops.excited, pops.ground};
  return entropy_of(pair, kind);
}

double field_entropy(const EvolvedState& state, EntropyKind kind, FieldEntropyForm form) {
  return form == FieldEntropyForm::paper_coarse ? coarse_field_entropy(state, kind)
                                                : full_field_entropy(state, kind);
}

std::vector<double> uniform_time_grid(double duration, std::size_t samples) {
  if (!(duration > 0.0) || samples < 2) {
    throw DomainError("time grid needs duration > 0 and at least 2 samples");
  }
  std::vector<double> grid(samples);
  const double step = duration / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) grid[i] = step * static_cast<double>(i);
  grid.back() = duration;
  return grid;
}

double default_window(const ModelParams& params) {
  const double lambda = std::abs(params.lambda());
  return lambda > 0.0 ? 50.0 / lambda : 50.0;
}

EntropyTrace entropy_trace(const ModelParams& params, const AtomInit& atom,
                           const PhotonDistribution& dist, EntropyKind kind, FieldEntropyForm form,
                           std::span<const double> grid, unsigned threads) {
  if (grid.empty() || grid.front() != 0.0) throw DomainError("time grid must start at t = 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] >= grid[i - 1])) throw DomainError("time grid must be non-decreasing");
  }

  const Evolution evolution(params, atom, dist);
  const EvolvedState initial = evolution.at(0.0);
  const double sa0 = atom_entropy(initial, kind);
  const double sb0 = field_entropy(initial, kind, form);

  EntropyTrace trace;
  trace.times.assign(grid.begin(), grid.end());
  trace.dSa.resize(grid.size());
  trace.dSb.resize(grid.size());
  trace.dStot.resize(grid.size());
  parallel_chunks(grid.size(), threads, [&](std::size_t begin, std::size_t end) {
    EvolvedState state;
    for (std::size_t i = begin; i < end; ++i) {
      evolution.evaluate(grid[i], state);
      trace.dSa[i] = atom_entropy(state, kind) - sa0;
      trace.dSb[i] = field_entropy(state, kind, form) - sb0;
      trace.dStot[i] = trace.dSa[i] + trace.dSb[i];
    }
  });

  trace.info.n_max = dist.n_max();
  trace.info.tail_mass = dist.tail_mass;
  trace.info.tail_limited = dist.tail_limited;
  trace.info.epsilon = atom.epsilon();
  trace.info.kind = kind;
  trace.info.form = form;
  trace.info.initial_atom_entropy = sa0;
  trace.info.initial_field_entropy = sb0;
  if (grid.size() >= 2 && grid.back() > 0.0) {
    const TimeAverage avg = time_average(trace, grid.back());
    trace.avg_dSa = avg.dSa;
    trace.avg_dSb = avg.dSb;
  }
  return trace;
}

EntropyTrace entropy_trace(const ModelParams& params, const AtomInit& atom,
                           const CavityModel& model, EntropyKind kind, FieldEntropyForm form,
                           std::span<const double> grid, const TraceOptions& options) {
  const PhotonDistribution dist = photon_weights(model, options.truncation);
  return entropy_trace(params, atom, dist, kind, form, grid, options.threads);
}

TimeAverage time_average(const EntropyTrace& trace, double duration, double coarse_tol) {
  if (trace.times.size() < 2) throw DomainError("time average needs at least two samples");
  if (!(duration > 0.0) || duration > trace.times.back() * (1.0 + 1e-12)) {
    throw DomainError("averaging window must lie in (0, last sample time]");
  }
  TimeAverage avg;
  avg.dSa = window_mean(trace.times, trace.dSa, duration);
  avg.dSb = window_mean(trace.times, trace.dSb, duration);
  if (trace.times.size() >= 5) {
    const double half_a = half_grid_mean(trace.times, trace.dSa, duration);
    const double half_b = half_grid_mean(trace.times, trace.dSb, duration);
    avg.richardson_delta = std::max(std::abs(avg.dSa - half_a), std::abs(avg.dSb - half_b));
    avg.coarse_grid_warning = avg.richardson_delta > coarse_tol;
  }
  return avg;
}

double BlochPoint::epsilon() const noexcept { return 0.5 * (1.0 + r * std::cos(theta)); }

BlochGrid BlochGrid::uniform(std::size_t nr, std::size_t ntheta) {
  if (nr < 1 || ntheta < 1) throw DomainError("Bloch grid needs at least one radius and angle");
  BlochGrid grid;
  for (std::size_t i = 0; i < nr; ++i) {
    grid.radii.push_back(nr == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(nr - 1));
  }
  for (std::size_t j = 0; j < ntheta; ++j) {
    grid.angles.push_back(ntheta == 1 ? std::numbers::pi
                                      : std::numbers::pi * static_cast<double>(j) /
                                            static_cast<double>(ntheta - 1));
  }
  return grid;
}

std::vector<BlochCell> bloch_sweep(const ModelParams& params, const PhotonDistribution& dist,
                                   EntropyKind kind, FieldEntropyForm form, const BlochGrid& grid,
                                   std::span<const double> times, unsigned threads) {
  for (double r : grid.radii) {
    if (!(r >= 0.0 && r <= 1.0)) throw DomainError("Bloch radius must lie in [0, 1]");
  }
  for (double theta : grid.angles) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
      throw DomainError("Bloch angle must lie in [0, pi]");
    }
  }

  std::vector<BlochCell> cells;
  cells.reserve(grid.radii.size() * grid.angles.size());
  std::map<double, std::size_t> slot_of_epsilon;
  for (double r : grid.radii) {
    for (double theta : grid.angles) {
      BlochCell cell;
      cell.r = r;
      cell.theta = theta;
      // Clamp rounding at the poles; eps is a probability.
      cell.epsilon = std::clamp(BlochPoint{r, theta}.epsilon(), 0.0, 1.0);
      slot_of_epsilon.emplace(cell.epsilon, 0);
      cells.push_back(cell);
    }
  }

  std::vector<double> epsilons;
  for (auto& [eps, slot] : slot_of_epsilon) {
    slot = epsilons.size();
    epsilons.push_back(eps);
  }
  std::vector<std::pair<double, double>> averages(epsilons.size());
  parallel_chunks(epsilons.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const EntropyTrace trace =
          entropy_trace(params, AtomInit(epsilons[i]), dist, kind, form, times, 1);
      averages[i] = {trace.avg_dSa, trace.avg_dSb};
    }
  });

  for (BlochCell& cell : cells) {
    const auto& [a, b] = averages[slot_of_epsilon.at(cell.epsilon)];
    cell.avg_dSa = a;
    cell.avg_dSb = b;
  }
  return cells;
}

}  // namespace jcmss
