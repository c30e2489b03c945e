#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "jcmss/errors.hpp"
#include "jcmss/superstat.hpp"
#include "oracles.hpp"

using namespace jcmss;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

double total(const PhotonDistribution& d) {
  oracle::KahanSum s;
  for (double w : d.weights) s.add(w);
  s.add(d.tail_mass);
  return s.value();
}

GammaSuperstat gamma(double q, double beta_star, double omega = 1.0) {
  return GammaSuperstat(Deformation::tsallis(q), beta_star, omega);
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS(gamma(2.0, 1.0), DomainError);
  CHECK_THROWS_AS(gamma(0.8, 1.0), DomainError);
  CHECK_THROWS_AS(gamma(1.5, 0.0), DomainError);
  CHECK_THROWS_AS(gamma(1.5, 1.0, -1.0), DomainError);
  CHECK_NOTHROW(GammaSuperstat(Deformation::gibbs(), 2.0));
  CHECK_THROWS_AS(MultiLevelSuperstat({}), DomainError);
  CHECK_THROWS_AS(MultiLevelSuperstat({1.0, -2.0}), DomainError);
  const auto g = gamma(1.25, 2.0);
  CHECK(g.gamma_shape() == Approx(4.0));
  CHECK(g.zeta_offset() == Approx(2.0));
}

TEST_CASE("Gibbs weights") {
  const auto d = photon_weights_gibbs(2.0, 1.0);
  CHECK(d.source == WeightSource::gibbs);
  CHECK_FALSE(d.tail_limited);
  CHECK(d.tail_mass <= 1e-8);
  for (std::size_t n = 0; n < d.weights.size(); ++n) {
    CHECK(rel_close(d.weights[n], (1.0 - std::exp(-2.0)) * std::exp(-2.0 * n), 1e-14));
  }
  CHECK(close(total(d), 1.0, 1e-12));
}

TEST_CASE("gamma weights at q = 1.5, beta* w = 2") {
  const auto d = photon_weights_gamma(gamma(1.5, 2.0));
  CHECK(d.source == WeightSource::gamma);
  CHECK(close(d.weights[0], 6.0 / (kPi * kPi), 1e-12));
  CHECK(close(d.weights[1], 1.5 / (kPi * kPi), 1e-12));
  CHECK(d.weights[0] == Approx(0.607927).epsilon(1e-6));
  CHECK(d.weights[1] == Approx(0.151982).epsilon(1e-6));
  // p_n ~ 1/n^2 needs more than the default level cap to reach 1e-8
  CHECK(d.tail_limited);
  CHECK(d.n_max() + 1 == Truncation{}.max_levels);
  CHECK(close(total(d), 1.0, 1e-12));
  // tail after n_max is sum_{m > n_max+1} 1/m^2 / zeta(2)
  const double n1 = static_cast<double>(d.n_max() + 1);
  CHECK(rel_close(d.tail_mass, oracle::hurwitz_brute(2.0, n1 + 1.0, 100000) * 6.0 / (kPi * kPi),
                  1e-8));

  const auto loose = photon_weights_gamma(gamma(1.5, 2.0), Truncation{1e-4, 1000000});
  CHECK_FALSE(loose.tail_limited);
  CHECK(loose.tail_mass <= 1e-4);
  // minimal cutoff: one level fewer would exceed the tolerance
  CHECK(loose.tail_mass + loose.weights.back() > 1e-4);
}

TEST_CASE("gamma weights near q = 1 match the Gibbs distribution") {
  const auto g = photon_weights_gamma(gamma(1.0 + 1e-9, 2.0));
  const auto b = photon_weights_gibbs(2.0, 1.0);
  const std::size_t n = std::min(g.weights.size(), b.weights.size());
  for (std::size_t i = 0; i < n; ++i) CHECK(close(g.weights[i], b.weights[i], 1e-6));
  const auto explicit_gibbs = photon_weights_gamma(GammaSuperstat(Deformation::gibbs(), 2.0));
  CHECK(explicit_gibbs.weights == b.weights);
}

TEST_CASE("normalisation with exact tail accounting") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> qd(1.05, 1.6), bd(0.3, 5.0);
  for (int i = 0; i < 40; ++i) {
    const auto d = photon_weights_gamma(gamma(qd(rng), bd(rng)), Truncation{1e-8, 200000});
    std::size_t negative = 0;
    for (double w : d.weights) negative += w < 0.0 ? 1 : 0;
    CHECK(negative == 0);
    CHECK(close(total(d), 1.0, 1e-12));
    CHECK((d.tail_mass <= 1e-8 || d.tail_limited));
  }
}

TEST_CASE("heavy tails hit the level cap and report it") {
  const auto d = photon_weights_gamma(gamma(1.9, 1.0), Truncation{1e-8, 1000});
  CHECK(d.tail_limited);
  CHECK(d.n_max() + 1 == 1000);
  CHECK(d.tail_mass > 1e-8);
  CHECK(close(total(d), 1.0, 1e-12));
}

TEST_CASE("truncated keeps the mass") {
  const auto d = photon_weights_gamma(gamma(1.5, 2.0));
  const auto t = d.truncated(10);
  CHECK(t.n_max() == 10);
  CHECK(close(total(t), 1.0, 1e-12));
  CHECK(t.weights[10] == d.weights[10]);
}

TEST_CASE("multi-level weights") {
  const MultiLevelSuperstat two({1.0, 2.0});
  const double z = 1.0 / (1.0 - std::exp(-1.0)) + 1.0 / (1.0 - std::exp(-2.0));
  CHECK(rel_close(multilevel_partition(two), z, 1e-15));
  CHECK(rel_close(multilevel_partition(two), 2.738494349618992, 1e-14));
  const auto d = photon_weights_multilevel(two);
  CHECK(d.source == WeightSource::multilevel);
  CHECK(rel_close(d.weights[0], 2.0 / z, 1e-15));
  CHECK(rel_close(d.weights[0], 0.7303283281480062, 1e-14));
  CHECK(rel_close(d.weights[3], (std::exp(-3.0) + std::exp(-6.0)) / z, 1e-14));
  CHECK(close(total(d), 1.0, 1e-12));

  const MultiLevelSuperstat same({2.5, 2.5, 2.5});
  const auto e = photon_weights_multilevel(same);
  const auto g = photon_weights_gibbs(2.5, 1.0);
  REQUIRE(e.weights.size() == g.weights.size());
  for (std::size_t n = 0; n < e.weights.size(); ++n) CHECK(rel_close(e.weights[n], g.weights[n], 1e-12));
}

TEST_CASE("q_partition") {
  CHECK(close(q_partition(gamma(1.5, 2.0)), kPi * kPi / 6.0, 1e-12));
  CHECK(rel_close(q_partition(GammaSuperstat(Deformation::gibbs(), 0.7)),
                  1.0 / (1.0 - std::exp(-0.7)), 1e-15));
  for (double q : {1.2, 1.5, 1.8}) {
    for (double b : {0.5, 2.0}) {
      const auto s = gamma(q, b);
      CHECK(rel_close(photon_weights_gamma(s).weights[0] * q_partition(s), 1.0, 1e-13));
      CHECK(rel_close(q_partition(s), oracle::q_sums_brute(q, b).partition, 1e-8));
    }
  }
}

TEST_CASE("q_trace") {
  CHECK(q_trace(GammaSuperstat(Deformation::gibbs(), 1.3)) == 1.0);
  const double brute = oracle::q_sums_brute(1.5, 2.0).trace;
  CHECK(rel_close(brute, 0.5697735497023243, 1e-9));
  CHECK(rel_close(q_trace(gamma(1.5, 2.0)), 0.5697735497023243, 1e-12));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> qd(1.01, 1.99), bd(1e-3, 1e3);
  for (int i = 0; i < 100; ++i) CHECK(q_trace(gamma(qd(rng), bd(rng))) > 0.0);
}

TEST_CASE("q_internal_energy") {
  CHECK(rel_close(q_internal_energy(GammaSuperstat(Deformation::gibbs(), 2.0, 1.5)),
                  1.5 / std::expm1(3.0), 1e-15));
  const double brute = oracle::q_sums_brute(1.4, 1.0).energy;
  CHECK(rel_close(brute, 0.5125517418375685, 1e-9));
  CHECK(rel_close(q_internal_energy(gamma(1.4, 1.0)), 0.5125517418375685, 1e-12));
}

TEST_CASE("q_internal_energy equals -d ln_q Z / d beta*") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> qd(1.05, 1.9), bd(0.2, 5.0), wd(0.5, 2.0);
  for (int i = 0; i < 60; ++i) {
    const double q = qd(rng);
    const double b = bd(rng);
    const double w = wd(rng);
    const double h = 1e-5 * b;
    auto ln_q_z = [&](double beta_star) {
      const double z = q_partition(GammaSuperstat(Deformation::tsallis(q), beta_star, w));
      return std::expm1((1.0 - q) * std::log(z)) / (1.0 - q);
    };
    const double fd = -(ln_q_z(b + h) - ln_q_z(b - h)) / (2.0 * h);
    CHECK(rel_close(q_internal_energy(gamma(q, b, w)), fd, 1e-6));
  }
}

TEST_CASE("physical_beta") {
  CHECK(physical_beta(GammaSuperstat(Deformation::gibbs(), 1.7)) == 1.7);
  const auto s = oracle::q_sums_brute(1.4, 1.0);
  const double brute = 1.0 * s.trace / (1.0 + 0.4 * 1.0 * s.energy / s.trace);
  CHECK(rel_close(brute, 0.3714471712607894, 1e-9));
  CHECK(rel_close(physical_beta(gamma(1.4, 1.0)), 0.3714471712607894, 1e-12));
  for (int i = 0; i <= 60; ++i) {
    const double t_star = 0.1 * std::pow(100.0, i / 60.0);
    CHECK(1.0 / physical_beta(gamma(1.6, 1.0 / t_star)) >= t_star);
  }
  for (double b : {0.01, 0.5, 2.0, 50.0}) {
    CHECK(rel_close(physical_beta(gamma(1.0 + 1e-6, b)), b, 1e-4));
  }
}

TEST_CASE("calibrate_beta_star") {
  CHECK(calibrate_beta_star(Deformation::gibbs(), 2.3) == 2.3);
  const double target = std::log(11.0);
  const double bs = calibrate_beta_star(Deformation::tsallis(1.2), target);
  CHECK(rel_close(physical_beta(gamma(1.2, bs)), target, 1e-10));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> qd(1.05, 1.8), ud(std::log(0.05), std::log(20.0)),
      wd(0.5, 3.0);
  for (int i = 0; i < 40; ++i) {
    const double q = qd(rng);
    const double w = wd(rng);
    const double b_star = std::exp(ud(rng)) / w;
    const double beta = physical_beta(gamma(q, b_star, w));
    const double back = calibrate_beta_star(Deformation::tsallis(q), beta, w);
    CHECK(rel_close(back, b_star, 1e-10));
    CHECK(rel_close(physical_beta(gamma(q, back, w)), beta, 1e-10));
  }
  CHECK_THROWS_AS(calibrate_beta_star(Deformation::tsallis(1.5), 1e6), NoBracketError);
  CHECK_THROWS_AS(calibrate_beta_star(Deformation::tsallis(1.5), -1.0), DomainError);
}

TEST_CASE("mean photon numbers") {
  CHECK(close(mean_photon_bose(std::log(11.0)), 0.1, 1e-15));
  CHECK(rel_close(mean_photon_bose(3.0), 0.05239569649125595, 1e-14));
  CHECK(mean_photon_bose(800.0) == 0.0);
  CHECK_THROWS_AS(mean_photon_bose(0.0), DomainError);
  CHECK(close(mean_photon_q(GammaSuperstat(Deformation::gibbs(), std::log(11.0))), 0.1, 1e-15));

  const double target = std::log(11.0);
  const double expected[] = {0.102773, 0.100935, 0.094662};
  const double qs[] = {1.2, 1.4, 1.6};
  for (int i = 0; i < 3; ++i) {
    const auto q = Deformation::tsallis(qs[i]);
    const double n = mean_photon_q(GammaSuperstat(q, calibrate_beta_star(q, target)));
    CHECK(n == Approx(expected[i]).epsilon(1e-5));
  }
}

TEST_CASE("mean_photon_q against brute-force q-weighted sums") {
  for (double q : {1.2, 1.5, 1.9}) {
    for (double b : {0.5, 1.0, 3.0}) {
      const auto s = oracle::q_sums_brute(q, b);
      CHECK(rel_close(mean_photon_q(gamma(q, b)), s.energy / s.trace, 1e-8));
    }
  }
}
