#include "jcmss/ensemble.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "jcmss/errors.hpp"
#include "jcmss/io.hpp"

namespace jcmss {

namespace {

constexpr std::size_t kMaxConsecutiveRejections = 1'000'000;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

class PinnedUniform {
public:
  explicit PinnedUniform(std::uint64_t seed) : engine_(seed) {}
  /// [0, 1)
  double next() { return static_cast<double>(engine_() >> 11) * kTwoPow53Inv; }

private:
  std::mt19937_64 engine_;
};

double draw(PinnedUniform& u, const NormalShape& s) {
  const double u1 = u.next();
  const double u2 = u.next();
  return s.mean + s.sd * std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double draw(PinnedUniform& u, const WeibullShape& s) {
  return s.scale * std::pow(-std::log1p(-u.next()), 1.0 / s.shape);
}

BetaEnsembleSpec resolved(const BetaEnsembleSpec& spec) {
  BetaEnsembleSpec out = spec;
  if (auto* w = std::get_if<WeibullShape>(&out.shape); w && w->scale == 0.0) {
    *w = BetaEnsembleSpec::weibull_with_mean(3.0 / spec.omega, w->shape);
  }
  return out;
}

void validate(const BetaEnsembleSpec& spec) {
  if (spec.count < 1) throw DomainError("ensemble count must be >= 1");
  if (!(spec.omega > 0.0)) throw DomainError("ensemble omega must be positive");
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NormalShape>) {
          if (!std::isfinite(s.mean) || !(s.sd >= 0.0) || !std::isfinite(s.sd)) {
            throw DomainError("normal ensemble needs finite mean and sd >= 0");
          }
        } else {
          if (!(s.scale > 0.0) || !(s.shape > 0.0) || !std::isfinite(s.scale) ||
              !std::isfinite(s.shape)) {
            throw DomainError("Weibull ensemble needs positive scale and shape");
          }
        }
      },
      spec.shape);
}

}  // namespace

WeibullShape BetaEnsembleSpec::weibull_with_mean(double mean, double shape) {
  if (!(mean > 0.0) || !(shape > 0.0)) throw DomainError("Weibull mean and shape must be positive");
  return WeibullShape{mean / std::tgamma(1.0 + 1.0 / shape), shape};
}

MultiLevelSuperstat sample_betas(const BetaEnsembleSpec& raw) {
  const BetaEnsembleSpec spec = resolved(raw);
  validate(spec);
  PinnedUniform uniform(spec.seed);
  std::vector<double> betas;
  betas.reserve(spec.count);
  while (betas.size() < spec.count) {
    std::size_t rejections = 0;
    for (;;) {
      const double beta = std::visit([&](const auto& s) { return draw(uniform, s); }, spec.shape);
      if (beta > 0.0 && std::isfinite(beta)) {
        betas.push_back(beta);
        break;
      }
      if (++rejections > kMaxConsecutiveRejections) {
        throw RejectionOverflowError("more than 10^6 consecutive non-positive beta draws");
      }
    }
  }
  return MultiLevelSuperstat(std::move(betas), spec.omega);
}

nlohmann::json to_json(const BetaEnsembleSpec& raw) {
  const BetaEnsembleSpec spec = resolved(raw);
  nlohmann::json j;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NormalShape>) {
          j["shape"] = "normal";
          j["mean"] = s.mean;
          j["sd"] = s.sd;
        } else {
          j["shape"] = "weibull";
          j["scale"] = s.scale;
          j["k"] = s.shape;
        }
      },
      spec.shape);
  j["count"] = spec.count;
  j["seed"] = spec.seed;
  j["omega"] = spec.omega;
  return j;
}

BetaEnsembleSpec spec_from_json(const nlohmann::json& j) {
  BetaEnsembleSpec spec;
  try {
    const std::string shape = j.at("shape").get<std::string>();
    if (shape == "normal") {
      spec.shape = NormalShape{j.value("mean", 3.0), j.value("sd", 0.3)};
    } else if (shape == "weibull") {
      spec.shape = WeibullShape{j.value("scale", 0.0), j.value("k", 2.0)};
    } else {
      throw ParseError("unknown ensemble shape '" + shape + "'");
    }
    spec.count = j.value("count", std::size_t{100});
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.omega = j.value("omega", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid ensemble spec: ") + e.what());
  }
  return spec;
}

std::string betas_text(const BetaEnsembleSpec& spec, const MultiLevelSuperstat& ensemble) {
  std::ostringstream out;
  out << "# " << to_json(spec).dump() << '\n';
  for (double beta : ensemble.betas()) out << format_double(beta) << '\n';
  return out.str();
}

void save_betas(const std::filesystem::path& path, const BetaEnsembleSpec& spec,
                const MultiLevelSuperstat& ensemble) {
  write_file_atomic(path, betas_text(spec, ensemble));
}

BetaSamples load_betas(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open beta sample file " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::optional<BetaEnsembleSpec> spec;
  std::vector<double> betas;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (line.front() == '#') {
      if (spec) continue;
      try {
        spec = spec_from_json(nlohmann::json::parse(line.substr(1)));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + ": header is not valid JSON: " + e.what());
      } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
      }
      continue;
    }
    double beta = 0.0;
    try {
      beta = parse_double(line);
    } catch (const ParseError& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw ParseError(where + ": beta entry " + std::to_string(betas.size()) +
                       " must be positive, got '" + line + "'");
    }
    betas.push_back(beta);
  }
  if (!spec) throw ParseError(path.string() + ": missing '# {spec json}' header line");
  if (betas.empty()) throw ParseError(path.string() + ": no beta values");
  const double omega = spec->omega;
  return BetaSamples{*spec, MultiLevelSuperstat(std::move(betas), omega)};
}

}  // namespace jcmss
