#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace jcmss::cli {

/// Bad flag combination or malformed flag value (exit code 2).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Every flag of every subcommand; each command reads the subset it declares.
struct RunConfig {
  std::string command;

  std::vector<double> q;
  bool has_beta = false;
  double beta = 0.0;
  bool has_beta_star = false;
  double beta_star = 0.0;
  double omega = 1.0;

  std::string betas_file;
  std::string ensemble;
  bool has_mean = false;
  double mean = 3.0;
  double sd = 0.3;
  double scale = 0.0;
  double k = 2.0;
  std::size_t count = 100;
  std::uint64_t seed = 0;

  double epsilon = 0.0;
  double delta = 0.0;
  double lambda = 2.0;
  std::string entropy;
  std::string field_entropy = "full";
  std::string grid;
  bool has_T = false;
  double T = 0.0;
  std::size_t samples = 2000;
  double tail_tol = 1e-8;
  bool has_max_levels = false;
  std::size_t max_levels = 0;
  unsigned threads = 1;

  std::string out;
  std::string format = "csv";

  bool perturb = false;

  /// Flags as given (command line merged with --config), keyed by long name.
  nlohmann::json given = nlohmann::json::object();
};

/// A table plus its metadata, rendered as CSV + sidecar or as one JSON document.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json meta;
};

void emit(const RunConfig& cfg, const Table& table, std::ostream& out);

int cmd_calibrate(const RunConfig& cfg, std::ostream& out);
int cmd_weights(const RunConfig& cfg, std::ostream& out);
int cmd_timeseries(const RunConfig& cfg, std::ostream& out);
int cmd_bloch_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_ensemble_gen(const RunConfig& cfg, std::ostream& out);
int cmd_selfcheck(const RunConfig& cfg, std::ostream& out);

}  // namespace jcmss::cli
