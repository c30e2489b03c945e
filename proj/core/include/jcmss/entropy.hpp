#pragma once

// Entropy functionals of the reduced atom and field states and the entropy
// exchange Delta S_j(t) = S_j(t) - S_j(0).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "jcmss/jcm.hpp"
#include "jcmss/specfun.hpp"
#include "jcmss/superstat.hpp"

namespace jcmss {

/// von Neumann (-Tr rho ln rho) or Tsallis-like (-Tr rho ln_q rho) entropy.
class EntropyKind {
public:
  static EntropyKind von_neumann() noexcept { return EntropyKind{}; }
  /// Requires 1 < q < 2.
  static EntropyKind tsallis(double q);

  bool is_tsallis() const noexcept { return !deformation_.is_gibbs(); }
  Deformation deformation() const noexcept { return deformation_; }

  friend bool operator==(const EntropyKind&, const EntropyKind&) = default;

private:
  EntropyKind() = default;
  Deformation deformation_ = Deformation::gibbs();
};

/// full_spectrum sums over every photon level; paper_coarse is the two-outcome
/// form (vacuum weight against the aggregated n >= 1 weight).
enum class FieldEntropyForm : std::uint8_t { full_spectrum, paper_coarse };

/// Gamma pipeline: tsallis(q) (von Neumann under Gibbs). Multi-level: von Neumann.
EntropyKind default_entropy_kind(const CavityModel& model);

/// -sum p_i ln p_i or -sum p_i ln_q p_i with 0 ln 0 = 0. Entries down to -1e-12
/// are treated as zero; anything more negative, or a total above 1 + 1e-10,
/// throws DomainError.
double entropy_of(std::span<const double> p, EntropyKind kind);

double atom_entropy(const EvolvedState& state, EntropyKind kind);
/// full_spectrum ignores the frozen tail beyond n_max (it cancels in Delta S_b);
/// paper_coarse folds it into the n >= 1 outcome.
double field_entropy(const EvolvedState& state, EntropyKind kind, FieldEntropyForm form);

struct TraceInfo {
  std::size_t n_max = 0;
  double tail_mass = 0.0;
  bool tail_limited = false;
  double epsilon = 0.0;
  EntropyKind kind = EntropyKind::von_neumann();
  FieldEntropyForm form = FieldEntropyForm::full_spectrum;
  double initial_atom_entropy = 0.0;
  double initial_field_entropy = 0.0;
};

struct EntropyTrace {
  std::vector<double> times;
  std::vector<double> dSa;
  std::vector<double> dSb;
  std::vector<double> dStot;
  double avg_dSa = 0.0;
  double avg_dSb = 0.0;
  TraceInfo info;
};

struct TraceOptions {
  Truncation truncation{1e-8, 65536};
  /// Worker threads for the time loop; results do not depend on this.
  unsigned threads = 1;
};

/// `samples` equally spaced times on [0, duration], both ends included.
std::vector<double> uniform_time_grid(double duration, std::size_t samples);

/// Default averaging window 50/lambda (50 when lambda = 0).
double default_window(const ModelParams& params);

/// Grid must start at t = 0 and be non-decreasing.
EntropyTrace entropy_trace(const ModelParams& params, const AtomInit& atom,
                           const PhotonDistribution& dist, EntropyKind kind, FieldEntropyForm form,
                           std::span<const double> grid, unsigned threads = 1);

EntropyTrace entropy_trace(const ModelParams& params, const AtomInit& atom,
                           const CavityModel& model, EntropyKind kind, FieldEntropyForm form,
                           std::span<const double> grid, const TraceOptions& options = {});

struct TimeAverage {
  double dSa = 0.0;
  double dSb = 0.0;
  /// max |full - half-grid| over the two averages.
  double richardson_delta = 0.0;
  bool coarse_grid_warning = false;
};

/// (1/T) int_0^T Delta S_j dt by composite Simpson on uniform grids (trapezoid
/// otherwise), with a half-grid comparison that flags under-resolved traces.
TimeAverage time_average(const EntropyTrace& trace, double duration, double coarse_tol = 1e-6);

struct BlochPoint {
  double r = 0.0;
  double theta = 0.0;
  /// eps = (1 + r cos theta) / 2
  double epsilon() const noexcept;
};

struct BlochGrid {
  std::vector<double> radii;
  std::vector<double> angles;
  /// nr radii on [0, 1] and ntheta angles on [0, pi]; a single point sits at r = 1 / theta = pi.
  static BlochGrid uniform(std::size_t nr, std::size_t ntheta);
};

struct BlochCell {
  double r = 0.0;
  double theta = 0.0;
  double epsilon = 0.0;
  double avg_dSa = 0.0;
  double avg_dSb = 0.0;
};

/// Row-major over (radii, angles). Points sharing the same eps reuse one trace.
std::vector<BlochCell> bloch_sweep(const ModelParams& params, const PhotonDistribution& dist,
                                   EntropyKind kind, FieldEntropyForm form, const BlochGrid& grid,
                                   std::span<const double> times, unsigned threads = 1);

}  // namespace jcmss
