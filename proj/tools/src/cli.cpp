#include "jcmss_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "jcmss/errors.hpp"
#include "jcmss/io.hpp"

namespace jcmss::cli {

namespace {

// Flags that never enter the recorded configuration: they select where output
// goes or how fast it is computed, not what is computed.
const std::vector<std::string> kUnrecorded = {"config", "out", "threads", "help"};

void add_output(CLI::App* s, RunConfig& c, bool with_format = true) {
  s->add_option("--out", c.out, "output path (stdout if omitted)");
  if (with_format) {
    s->add_option("--format", c.format, "csv (with .meta.json sidecar) or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  }
  s->add_option("--config", "JSON file of flag values; command-line flags take precedence");
}

void add_ensemble(CLI::App* s, RunConfig& c) {
  s->add_option("--ensemble", c.ensemble, "inverse-temperature ensemble shape: normal or weibull")
      ->check(CLI::IsMember({"normal", "weibull"}));
  s->add_option("--mean", c.mean, "ensemble mean of beta*omega (default 3)");
  s->add_option("--sd", c.sd, "normal ensemble standard deviation")->capture_default_str();
  s->add_option("--scale", c.scale, "Weibull scale (default: mean 3/omega)");
  s->add_option("--k", c.k, "Weibull shape")->capture_default_str();
  s->add_option("--count", c.count, "ensemble size N")->capture_default_str();
  s->add_option("--seed", c.seed, "ensemble seed")->capture_default_str();
  s->add_option("--omega", c.omega, "cavity frequency")->capture_default_str();
}

void add_model(CLI::App* s, RunConfig& c) {
  s->add_option("--q", c.q, "deformation index (1 selects the Gibbs state)")->expected(1);
  s->add_option("--beta", c.beta, "physical inverse temperature");
  s->add_option("--beta-star", c.beta_star, "quasi-temperature parameter beta*");
  s->add_option("--betas-file", c.betas_file, "multi-level beta samples file");
  add_ensemble(s, c);
  s->add_option("--tail-tol", c.tail_tol, "photon tail tolerance")->capture_default_str();
  s->add_option("--max-levels", c.max_levels, "hard cap on photon levels");
}

void add_dynamics(CLI::App* s, RunConfig& c, bool with_epsilon) {
  if (with_epsilon) {
    s->add_option("--epsilon", c.epsilon, "initial excited-state weight")->capture_default_str();
  }
  s->add_option("--delta", c.delta, "detuning omega0 - omega")->capture_default_str();
  s->add_option("--lambda", c.lambda, "coupling strength")->capture_default_str();
  s->add_option("--entropy", c.entropy, "vn or tsallis (default follows the model)")
      ->check(CLI::IsMember({"vn", "tsallis"}));
  s->add_option("--field-entropy", c.field_entropy, "full or coarse")
      ->check(CLI::IsMember({"full", "coarse"}))
      ->capture_default_str();
  s->add_option("--T", c.T, "averaging window in units of 1/omega (default 50/lambda)");
  s->add_option("--threads", c.threads, "worker threads (output does not depend on it)")
      ->capture_default_str();
}

std::string json_to_token(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number() || v.is_boolean()) return v.dump();
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (!joined.empty()) joined += ',';
      joined += json_to_token(item);
    }
    return joined;
  }
  throw UsageError("unsupported config value " + v.dump());
}

bool on_command_line(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::string config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

nlohmann::json load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw ParseError(path + ": config must be a JSON object");
  // A metadata sidecar carries its flags under "config".
  if (j.contains("config") && j.contains("command")) {
    if (j["command"] != command) {
      throw UsageError(path + " records command '" + j["command"].get<std::string>() +
                       "', not '" + command + "'");
    }
    return j["config"];
  }
  return j;
}

nlohmann::json recorded_value(const CLI::Option* opt) {
  if (opt->get_expected_min() == 0) return true;
  auto as_json = [](const std::string& s) -> nlohmann::json {
    std::uint64_t whole = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), whole);
    if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return whole;
    try {
      const double v = parse_double(s);
      if (format_double(v) == s) return v;
    } catch (const ParseError&) {
    }
    return s;
  };
  const auto& results = opt->results();
  if (opt->get_expected_max() > 1 || results.size() > 1) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back(as_json(r));
    return arr;
  }
  return as_json(results.empty() ? std::string{} : results.front());
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "calibrate") return cmd_calibrate(cfg, out);
  if (cfg.command == "weights") return cmd_weights(cfg, out);
  if (cfg.command == "timeseries") return cmd_timeseries(cfg, out);
  if (cfg.command == "bloch-sweep") return cmd_bloch_sweep(cfg, out);
  if (cfg.command == "ensemble-gen") return cmd_ensemble_gen(cfg, out);
  return cmd_selfcheck(cfg, out);
}

int run_checked(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Entropy exchange in the Jaynes-Cummings model with superstatistical cavity states",
               "jcmss"};
  app.require_subcommand(1);

  auto* calibrate = app.add_subcommand("calibrate", "physical temperature T against T* per q");
  calibrate->add_option("--q", cfg.q, "comma-separated q values (1 = Gibbs)")->delimiter(',');
  calibrate->add_option("--grid", cfg.grid, "T*/omega grid as min:max:count");
  calibrate->add_option("--omega", cfg.omega, "cavity frequency")->capture_default_str();
  add_output(calibrate, cfg);

  auto* weights = app.add_subcommand("weights", "photon-number distribution of the cavity state");
  add_model(weights, cfg);
  add_output(weights, cfg);

  auto* timeseries = app.add_subcommand("timeseries", "entropy exchange time series");
  add_model(timeseries, cfg);
  add_dynamics(timeseries, cfg, true);
  timeseries->add_option("--grid", cfg.grid, "number of time samples on [0, T] (default 2000)");
  add_output(timeseries, cfg);

  auto* bloch = app.add_subcommand("bloch-sweep", "time-averaged exchange over the Bloch sphere");
  add_model(bloch, cfg);
  add_dynamics(bloch, cfg, false);
  bloch->add_option("--grid", cfg.grid, "NRxNTHETA points (default 11x11)");
  bloch->add_option("--samples", cfg.samples, "time samples on [0, T]")->capture_default_str();
  add_output(bloch, cfg);

  auto* gen = app.add_subcommand("ensemble-gen", "draw and save an inverse-temperature ensemble");
  add_ensemble(gen, cfg);
  add_output(gen, cfg, false);

  auto* selfcheck = app.add_subcommand("selfcheck", "closed forms against brute-force evolution");
  selfcheck->add_option("--seed", cfg.seed, "seed of the sampled times")->capture_default_str();
  selfcheck->add_option("--tail-tol", cfg.tail_tol, "photon tail tolerance")->capture_default_str();
  selfcheck->add_flag("--perturb-coefficient", cfg.perturb)->group("");
  add_output(selfcheck, cfg);

  std::vector<std::string> args = raw;
  CLI::App* sub = nullptr;
  for (const auto& a : raw) {
    if (!a.empty() && a.front() == '-') continue;
    for (CLI::App* candidate : app.get_subcommands({})) {
      if (candidate->get_name() == a) sub = candidate;
    }
    break;
  }

  if (sub != nullptr) {
    if (const std::string path = config_path(raw); !path.empty()) {
      const nlohmann::json file = load_config(path, sub->get_name());
      for (const auto& [key, value] : file.items()) {
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
          throw UsageError(path + ": unknown flag '" + key + "' for " + sub->get_name());
        }
        if (on_command_line(raw, key)) continue;
        if (opt->get_expected_min() == 0) {
          if (value.is_boolean() ? value.get<bool>() : json_to_token(value) == "true") {
            args.push_back("--" + key);
          }
          continue;
        }
        args.push_back("--" + key + "=" + json_to_token(value));
      }
    }
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_single_name();
    if (std::find(kUnrecorded.begin(), kUnrecorded.end(), name) != kUnrecorded.end()) continue;
    cfg.given[name] = recorded_value(opt);
  }
  cfg.has_beta = sub->get_option_no_throw("--beta") && sub->count("--beta") > 0;
  cfg.has_beta_star = sub->get_option_no_throw("--beta-star") && sub->count("--beta-star") > 0;
  cfg.has_T = sub->get_option_no_throw("--T") && sub->count("--T") > 0;
  cfg.has_max_levels =
      sub->get_option_no_throw("--max-levels") && sub->count("--max-levels") > 0;
  cfg.has_mean = sub->get_option_no_throw("--mean") && sub->count("--mean") > 0;
  return dispatch(cfg, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run_checked(args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << '\n';
    return kAccuracy;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const RejectionOverflowError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kIo;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  }
}

}  // namespace jcmss::cli
