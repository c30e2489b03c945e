#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <optional>
#include <variant>

#include "jcmss/ensemble.hpp"
#include "jcmss/entropy.hpp"
#include "jcmss/errors.hpp"
#include "jcmss/io.hpp"
#include "jcmss/jcm.hpp"
#include "jcmss/superstat.hpp"

#ifndef JCMSS_VERSION
#define JCMSS_VERSION "unknown"
#endif

namespace jcmss::cli {

namespace {

constexpr std::size_t kWeightsMaxLevels = 10'000'000;
constexpr std::size_t kDynamicsMaxLevels = 65'536;
constexpr std::size_t kDefaultSamples = 2000;

nlohmann::json base_meta(const RunConfig& cfg) {
  nlohmann::json meta;
  meta["tool"] = "jcmss";
  meta["version"] = JCMSS_VERSION;
  meta["command"] = cfg.command;
  meta["config"] = cfg.given;
  return meta;
}

std::size_t parse_count(std::string_view text, const char* what) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError(std::string(what) + ": '" + std::string(text) + "' is not a count");
  }
  return value;
}

double parse_number(std::string_view text, const char* what) {
  try {
    return parse_double(text);
  } catch (const ParseError&) {
    throw UsageError(std::string(what) + ": '" + std::string(text) + "' is not a number");
  }
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

BetaEnsembleSpec ensemble_spec(const RunConfig& cfg) {
  if (!(cfg.omega > 0.0)) throw DomainError("omega must be positive");
  BetaEnsembleSpec spec;
  spec.count = cfg.count;
  spec.seed = cfg.seed;
  spec.omega = cfg.omega;
  const double mean = cfg.mean / cfg.omega;
  if (cfg.ensemble == "weibull") {
    if (cfg.scale != 0.0 && cfg.has_mean) {
      throw UsageError("give either --scale or --mean for a Weibull ensemble");
    }
    spec.shape = cfg.scale != 0.0 ? WeibullShape{cfg.scale / cfg.omega, cfg.k}
                                  : BetaEnsembleSpec::weibull_with_mean(mean, cfg.k);
  } else {
    spec.shape = NormalShape{mean, cfg.sd / cfg.omega};
  }
  return spec;
}

struct ResolvedModel {
  CavityModel model = GammaSuperstat(Deformation::gibbs(), 1.0);
  Deformation q = Deformation::gibbs();
  bool multilevel = false;
  double omega = 1.0;
  nlohmann::json derived = nlohmann::json::object();
};

ResolvedModel resolve_model(const RunConfig& cfg) {
  ResolvedModel out;
  if (!cfg.betas_file.empty() && !cfg.ensemble.empty()) {
    throw UsageError("--betas-file and --ensemble are mutually exclusive");
  }
  if (!cfg.betas_file.empty() || !cfg.ensemble.empty()) {
    if (!cfg.q.empty() || cfg.has_beta || cfg.has_beta_star) {
      throw UsageError("a multi-level ensemble takes no --q, --beta or --beta-star");
    }
    BetaEnsembleSpec spec;
    std::optional<MultiLevelSuperstat> ensemble;
    if (!cfg.betas_file.empty()) {
      BetaSamples loaded = load_betas(cfg.betas_file);
      if (cfg.given.contains("omega") && cfg.omega != loaded.spec.omega) {
        throw UsageError("--omega disagrees with the omega recorded in " + cfg.betas_file);
      }
      spec = loaded.spec;
      ensemble.emplace(std::move(loaded.ensemble));
    } else {
      spec = ensemble_spec(cfg);
      ensemble.emplace(sample_betas(spec));
    }
    out.multilevel = true;
    out.omega = ensemble->omega();
    out.derived["model"] = "multilevel";
    out.derived["ensemble"] = to_json(spec);
    out.derived["N"] = ensemble->size();
    out.derived["partition"] = multilevel_partition(*ensemble);
    out.derived["betas"] = std::vector<double>(ensemble->betas().begin(), ensemble->betas().end());
    out.model = std::move(*ensemble);
    return out;
  }

  if (cfg.q.size() > 1) throw UsageError("--q takes a single value for " + cfg.command);
  if (cfg.has_beta == cfg.has_beta_star) throw UsageError("give exactly one of --beta or --beta-star");
  out.q = cfg.q.empty() ? Deformation::gibbs() : Deformation::from_value(cfg.q.front());
  out.omega = cfg.omega;
  const double beta_star =
      cfg.has_beta_star ? cfg.beta_star : calibrate_beta_star(out.q, cfg.beta, cfg.omega);
  const GammaSuperstat s(out.q, beta_star, cfg.omega);
  out.derived["model"] = out.q.is_gibbs() ? "gibbs" : "gamma";
  out.derived["q"] = out.q.q();
  out.derived["beta_star"] = beta_star;
  out.derived["beta"] = physical_beta(s);
  out.derived["mean_photon"] = mean_photon_q(s);
  if (!out.q.is_gibbs()) {
    out.derived["q_partition"] = q_partition(s);
    out.derived["q_trace"] = q_trace(s);
    out.derived["q_internal_energy"] = q_internal_energy(s);
  }
  out.model = s;
  return out;
}

Truncation truncation(const RunConfig& cfg, std::size_t default_levels) {
  return Truncation{cfg.tail_tol, cfg.has_max_levels ? cfg.max_levels : default_levels};
}

EntropyKind entropy_kind(const RunConfig& cfg, const ResolvedModel& m) {
  if (cfg.entropy.empty()) return default_entropy_kind(m.model);
  if (cfg.entropy == "vn") return EntropyKind::von_neumann();
  if (m.multilevel || m.q.is_gibbs()) {
    throw UsageError("--entropy tsallis needs a gamma model with --q in (1, 2)");
  }
  return EntropyKind::tsallis(m.q.q());
}

FieldEntropyForm field_form(const RunConfig& cfg) {
  return cfg.field_entropy == "coarse" ? FieldEntropyForm::paper_coarse
                                       : FieldEntropyForm::full_spectrum;
}

struct Dynamics {
  ModelParams params;
  EntropyKind kind;
  FieldEntropyForm form;
  double window;
  PhotonDistribution dist;
};

Dynamics resolve_dynamics(const RunConfig& cfg, const ResolvedModel& m, nlohmann::json& meta) {
  const ModelParams params = ModelParams::from_detuning(cfg.delta, cfg.lambda, m.omega);
  const double window = cfg.has_T ? cfg.T : default_window(params);
  if (!(window > 0.0) || !std::isfinite(window)) throw DomainError("--T must be positive");
  const Truncation trunc = truncation(cfg, kDynamicsMaxLevels);
  Dynamics d{params, entropy_kind(cfg, m), field_form(cfg), window,
             photon_weights(m.model, trunc)};

  auto& p = meta["parameters"];
  p["omega"] = m.omega;
  p["omega0"] = params.omega0();
  p["delta"] = params.delta();
  p["lambda"] = params.lambda();
  p["entropy"] = d.kind.is_tsallis() ? "tsallis" : "vn";
  p["entropy_q"] = d.kind.deformation().q();
  p["field_entropy"] = d.form == FieldEntropyForm::paper_coarse ? "coarse" : "full";
  p["T"] = window;
  p["tail_tol"] = trunc.tail_tol;
  p["max_levels"] = trunc.max_levels;
  meta["derived"]["n_max"] = d.dist.n_max();
  meta["derived"]["tail_mass"] = d.dist.tail_mass;
  meta["derived"]["tail_limited"] = d.dist.tail_limited;
  return d;
}

std::string csv_text(const Table& table) {
  std::string text;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i > 0) text += ',';
    text += table.columns[i];
  }
  text += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) text += ',';
      text += format_double(row[i]);
    }
    text += '\n';
  }
  return text;
}

}  // namespace

void emit(const RunConfig& cfg, const Table& table, std::ostream& out) {
  if (cfg.format == "json") {
    nlohmann::json doc = table.meta;
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    const std::string text = doc.dump(2) + "\n";
    if (cfg.out.empty()) {
      out << text;
    } else {
      write_file_atomic(cfg.out, text);
    }
    return;
  }
  const std::string csv = csv_text(table);
  if (cfg.out.empty()) {
    out << csv;
    return;
  }
  write_file_atomic(cfg.out, csv);
  write_file_atomic(cfg.out + ".meta.json", table.meta.dump(2) + "\n");
}

int cmd_calibrate(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> qs = cfg.q.empty() ? std::vector<double>{1.0, 1.2, 1.4, 1.6} : cfg.q;
  const std::string grid = cfg.grid.empty() ? "0.1:10:100" : cfg.grid;
  const auto parts = split(grid, ':');
  if (parts.size() != 3) throw UsageError("--grid for calibrate is min:max:count, got '" + grid + "'");
  const double lo = parse_number(parts[0], "--grid min");
  const double hi = parse_number(parts[1], "--grid max");
  const std::size_t count = parse_count(parts[2], "--grid count");
  if (!(lo > 0.0) || !(hi >= lo) || count < 1 || (count == 1 && hi != lo)) {
    throw UsageError("--grid needs 0 < min <= max and count >= 1 (count 1 only with min = max)");
  }
  if (!(cfg.omega > 0.0)) throw DomainError("omega must be positive");

  Table table;
  table.columns = {"q", "T_star", "T"};
  table.meta = base_meta(cfg);
  table.meta["parameters"] = {{"q", qs}, {"grid", grid}, {"omega", cfg.omega}};
  for (double qv : qs) {
    const Deformation q = Deformation::from_value(qv);
    for (std::size_t i = 0; i < count; ++i) {
      const double x =
          count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
      const double t_star = x * cfg.omega;
      const double beta = physical_beta(GammaSuperstat(q, 1.0 / t_star, cfg.omega));
      table.rows.push_back({qv, t_star, 1.0 / beta});
    }
  }
  emit(cfg, table, out);
  return 0;
}

int cmd_weights(const RunConfig& cfg, std::ostream& out) {
  const ResolvedModel m = resolve_model(cfg);
  const Truncation trunc = truncation(cfg, kWeightsMaxLevels);
  const PhotonDistribution dist = photon_weights(m.model, trunc);

  Table table;
  table.columns = {"n", "p"};
  table.meta = base_meta(cfg);
  table.meta["parameters"] = {{"omega", m.omega},
                              {"tail_tol", trunc.tail_tol},
                              {"max_levels", trunc.max_levels}};
  table.meta["derived"] = m.derived;
  table.meta["derived"]["n_max"] = dist.n_max();
  table.meta["derived"]["tail_mass"] = dist.tail_mass;
  table.meta["derived"]["tail_limited"] = dist.tail_limited;
  table.rows.reserve(dist.weights.size());
  for (std::size_t n = 0; n < dist.weights.size(); ++n) {
    table.rows.push_back({static_cast<double>(n), dist.weights[n]});
  }
  emit(cfg, table, out);
  return 0;
}

int cmd_timeseries(const RunConfig& cfg, std::ostream& out) {
  const ResolvedModel m = resolve_model(cfg);
  Table table;
  table.meta = base_meta(cfg);
  table.meta["derived"] = m.derived;
  const Dynamics d = resolve_dynamics(cfg, m, table.meta);
  const std::size_t samples = cfg.grid.empty() ? kDefaultSamples : parse_count(cfg.grid, "--grid");
  if (samples < 2) throw UsageError("--grid needs at least 2 time samples");
  const auto times = uniform_time_grid(d.window, samples);
  const AtomInit atom(cfg.epsilon);
  const EntropyTrace trace =
      entropy_trace(d.params, atom, d.dist, d.kind, d.form, times, std::max(1u, cfg.threads));
  const TimeAverage avg = time_average(trace, d.window);

  table.meta["parameters"]["epsilon"] = cfg.epsilon;
  table.meta["parameters"]["samples"] = samples;
  auto& derived = table.meta["derived"];
  derived["avg_dSa"] = avg.dSa;
  derived["avg_dSb"] = avg.dSb;
  derived["richardson_delta"] = avg.richardson_delta;
  derived["coarse_grid_warning"] = avg.coarse_grid_warning;
  derived["initial_atom_entropy"] = trace.info.initial_atom_entropy;
  derived["initial_field_entropy"] = trace.info.initial_field_entropy;

  table.columns = {"t", "dS_a", "dS_b", "dS_total"};
  table.rows.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    table.rows.push_back({trace.times[i], trace.dSa[i], trace.dSb[i], trace.dStot[i]});
  }
  emit(cfg, table, out);
  return 0;
}

int cmd_bloch_sweep(const RunConfig& cfg, std::ostream& out) {
  const std::string spec = cfg.grid.empty() ? "11x11" : cfg.grid;
  const auto parts = split(spec, 'x');
  if (parts.size() != 2) throw UsageError("--grid for bloch-sweep is NRxNTHETA, got '" + spec + "'");
  const std::size_t nr = parse_count(parts[0], "--grid NR");
  const std::size_t ntheta = parse_count(parts[1], "--grid NTHETA");
  if (nr < 1 || ntheta < 1) throw UsageError("--grid needs at least one radius and one angle");
  if (cfg.samples < 2) throw UsageError("--samples needs at least 2 time samples");

  const ResolvedModel m = resolve_model(cfg);
  Table table;
  table.meta = base_meta(cfg);
  table.meta["derived"] = m.derived;
  const Dynamics d = resolve_dynamics(cfg, m, table.meta);
  table.meta["parameters"]["grid"] = spec;
  table.meta["parameters"]["samples"] = cfg.samples;
  const auto times = uniform_time_grid(d.window, cfg.samples);
  const auto cells = bloch_sweep(d.params, d.dist, d.kind, d.form, BlochGrid::uniform(nr, ntheta),
                                 times, std::max(1u, cfg.threads));

  table.columns = {"r", "theta", "epsilon", "avg_dSa", "avg_dSb"};
  for (const auto& c : cells) table.rows.push_back({c.r, c.theta, c.epsilon, c.avg_dSa, c.avg_dSb});
  emit(cfg, table, out);
  return 0;
}

int cmd_ensemble_gen(const RunConfig& cfg, std::ostream& out) {
  const BetaEnsembleSpec spec = ensemble_spec(cfg);
  const MultiLevelSuperstat ensemble = sample_betas(spec);
  if (cfg.out.empty()) {
    out << betas_text(spec, ensemble);
  } else {
    save_betas(cfg.out, spec, ensemble);
  }
  return 0;
}

}  // namespace jcmss::cli
