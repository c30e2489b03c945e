// Release gate: closed-form dynamics against the dense brute-force evolution,
// plus the exact structural invariants, over a fixed parameter grid.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "jcmss/entropy.hpp"
#include "jcmss/io.hpp"
#include "jcmss/jcm.hpp"
#include "jcmss/superstat.hpp"

#ifndef JCMSS_VERSION
#define JCMSS_VERSION "unknown"
#endif

namespace jcmss::cli {

namespace {

constexpr std::size_t kCut = 30;
constexpr std::size_t kTimesPerConfig = 12;
constexpr std::size_t kMaxLevels = 65'536;
constexpr double kPerturbation = 1e-6;

struct Setup {
  std::string label;
  double delta;
  double lambda;
  double epsilon;
  CavityModel model;
};

std::vector<Setup> setups() {
  const double ln11 = std::log(11.0);
  auto gamma = [&](double q, double beta) {
    const Deformation d = Deformation::from_value(q);
    return GammaSuperstat(d, calibrate_beta_star(d, beta));
  };
  return {
      {"gibbs beta=ln11", 0.0, 2.0, 0.0, gamma(1.0, ln11)},
      {"gibbs beta=ln11", 0.0, 2.0, 1.0, gamma(1.0, ln11)},
      {"gamma q=1.5 beta=ln11", 0.0, 2.0, 0.0, gamma(1.5, ln11)},
      {"gamma q=1.5 beta=ln11", 0.0, 2.0, 1.0, gamma(1.5, ln11)},
      {"gamma q=1.5 beta=ln11", 1.0, 2.0, 0.3, gamma(1.5, ln11)},
      {"gamma q=1.2 beta=1", -2.0, 0.7, 0.6, gamma(1.2, 1.0)},
      {"gamma q=1.4 beta=2", 0.5, 0.0, 0.4, gamma(1.4, 2.0)},
      {"multilevel beta={2.5,3,3.5}", 0.0, 2.0, 1.0, MultiLevelSuperstat({2.5, 3.0, 3.5})},
  };
}

struct Check {
  std::string name;
  double tol;
  double max_dev = 0.0;
  void observe(double dev) { max_dev = std::max(max_dev, std::isnan(dev) ? INFINITY : dev); }
  bool pass() const { return max_dev <= tol; }
};

double state_total(const EvolvedState& s) {
  double total = s.uncoupled_weight + s.frozen_excited + s.frozen_ground;
  for (double a : s.coeff_A) total += a;
  for (double c : s.coeff_C) total += c;
  return total;
}

}  // namespace

int cmd_selfcheck(const RunConfig& cfg, std::ostream& out) {
  Check oracle{"oracle_equivalence", 1e-8};
  Check probability{"total_probability", 1e-10};
  Check conservation{"block_conservation", 1e-10};
  Check positivity{"block_positivity", 1e-12};
  Check dressed{"dressed_identity", 1e-12};
  Check initial{"initial_exchange", 1e-12};

  std::mt19937_64 rng(cfg.seed);
  nlohmann::json configurations = nlohmann::json::array();
  std::ostringstream text;
  std::size_t index = 0;
  for (const Setup& setup : setups()) {
    ++index;
    const ModelParams params = ModelParams::from_detuning(setup.delta, setup.lambda);
    const AtomInit atom(setup.epsilon);
    const PhotonDistribution dist = photon_weights(setup.model, Truncation{cfg.tail_tol, kMaxLevels});
    const std::size_t n_cut = std::clamp<std::size_t>(dist.n_max(), 1, kCut);
    const PhotonDistribution cut = dist.truncated(n_cut);
    const EntropyKind kind = default_entropy_kind(setup.model);
    const double horizon = setup.lambda != 0.0 ? 25.0 / std::abs(setup.lambda) : 25.0;
    std::uniform_real_distribution<double> time(0.0, horizon);

    nlohmann::json record = {{"label", setup.label},     {"delta", setup.delta},
                             {"lambda", setup.lambda},   {"epsilon", setup.epsilon},
                             {"n_max", dist.n_max()},    {"tail_mass", dist.tail_mass},
                             {"tail_limited", dist.tail_limited},
                             {"cut", n_cut},              {"cut_mass", cut.tail_mass}};
    configurations.push_back(record);
    text << "config " << index << ": " << setup.label << " delta=" << format_double(setup.delta)
         << " lambda=" << format_double(setup.lambda)
         << " eps=" << format_double(setup.epsilon) << " n_max=" << dist.n_max()
         << " tail_mass=" << format_double(dist.tail_mass)
         << " cut_mass=" << format_double(cut.tail_mass) << '\n';

    if (setup.lambda != 0.0) {
      for (std::size_t n = 0; n < std::max<std::size_t>(dist.n_max(), 1); ++n) {
        const ManifoldQuantities mq = manifold(params, n);
        const double expected = setup.delta * setup.delta +
                                setup.lambda * setup.lambda * static_cast<double>(n + 1);
        dressed.observe(std::abs(mq.omega_plus * mq.omega_minus + 1.0));
        dressed.observe(std::abs(mq.delta_n * mq.delta_n - expected) / expected);
      }
    }

    std::vector<double> grid{0.0};
    const Evolution full(params, atom, dist);
    const Evolution truncated(params, atom, cut);
    EvolvedState s;
    for (std::size_t k = 0; k < kTimesPerConfig; ++k) {
      const double t = time(rng);
      grid.push_back(t);

      full.evaluate(t, s);
      probability.observe(std::abs(state_total(s) - 1.0));
      for (std::size_t n = 0; n < s.coeff_A.size(); ++n) {
        const double block = setup.epsilon * dist.weights[n] + (1.0 - setup.epsilon) * dist.weights[n + 1];
        conservation.observe(std::abs(s.coeff_A[n] + s.coeff_C[n] - block));
        positivity.observe(std::max({0.0, -s.coeff_A[n], -s.coeff_C[n],
                                     std::norm(s.coeff_B[n]) - s.coeff_A[n] * s.coeff_C[n]}));
      }

      truncated.evaluate(t, s);
      const OracleResult o = oracle_evolve(params, atom, cut, t, n_cut);
      const AtomPopulations pops = reduced_atom(s);
      oracle.observe(std::abs(pops.excited - o.atom.excited));
      oracle.observe(std::abs(pops.ground - o.atom.ground));
      const FieldPopulations field = reduced_field(s);
      for (std::size_t n = 0; n <= n_cut; ++n) {
        oracle.observe(std::abs(field.weights[n] - o.field.weights[n]));
      }
      const double atom_ref[2] = {o.atom.excited, o.atom.ground};
      oracle.observe(std::abs(atom_entropy(s, kind) - entropy_of(atom_ref, kind)));
      oracle.observe(std::abs(field_entropy(s, kind, FieldEntropyForm::full_spectrum) -
                              entropy_of(o.field.weights, kind)));
      if (cfg.perturb) s.coeff_A[0] += kPerturbation;
      for (std::size_t n = 0; n < n_cut; ++n) {
        oracle.observe(std::abs(s.coeff_A[n] - o.coeff_A[n]));
        oracle.observe(std::abs(s.coeff_C[n] - o.coeff_C[n]));
        oracle.observe(std::abs(s.coeff_B[n] + std::conj(o.coherence[n])));
      }
    }

    std::sort(grid.begin(), grid.end());
    for (auto form : {FieldEntropyForm::full_spectrum, FieldEntropyForm::paper_coarse}) {
      const EntropyTrace trace = entropy_trace(params, atom, dist, kind, form, grid);
      initial.observe(std::max(std::abs(trace.dSa[0]), std::abs(trace.dSb[0])));
    }
  }

  const std::vector<const Check*> checks{&oracle, &probability, &conservation,
                                         &positivity, &dressed, &initial};
  bool all = true;
  nlohmann::json check_records = nlohmann::json::array();
  for (const Check* c : checks) {
    all = all && c->pass();
    text << (c->pass() ? "PASS " : "FAIL ") << c->name << " max_dev=" << format_double(c->max_dev)
         << " tol=" << format_double(c->tol) << '\n';
    check_records.push_back(
        {{"name", c->name}, {"pass", c->pass()}, {"max_dev", c->max_dev}, {"tol", c->tol}});
  }
  text << "selfcheck: " << (all ? "all checks passed" : "FAILED") << '\n';

  nlohmann::json report;
  report["tool"] = "jcmss";
  report["version"] = JCMSS_VERSION;
  report["command"] = cfg.command;
  report["config"] = cfg.given;
  report["configurations"] = configurations;
  report["checks"] = check_records;
  report["passed"] = all;

  if (cfg.format == "json" && cfg.out.empty()) {
    out << report.dump(2) << '\n';
  } else {
    out << text.str();
    if (!cfg.out.empty()) write_file_atomic(cfg.out, report.dump(2) + "\n");
  }
  return all ? 0 : 1;
}

}  // namespace jcmss::cli
