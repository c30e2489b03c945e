// Brute-force reference for the closed-form coefficients: build the truncated
// Hamiltonian matrix from its operator definition, diagonalise it densely, and
// partial-trace the evolved density matrix.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "jcmss/errors.hpp"
#include "jcmss/jcm.hpp"

namespace jcmss {

namespace {

constexpr std::size_t kMaxOracleCut = 400;

}  // namespace

OracleResult oracle_evolve(const ModelParams& params, const AtomInit& atom,
                           const PhotonDistribution& dist, double t, std::size_t n_cut,
                           double warn_tol) {
  if (n_cut < 1 || n_cut > kMaxOracleCut) {
    throw DomainError("oracle cutoff must lie in [1, " + std::to_string(kMaxOracleCut) + "]");
  }
  if (dist.weights.empty()) throw DomainError("photon distribution has no weights");

  const PhotonDistribution cut = dist.truncated(n_cut);
  const std::size_t levels = n_cut + 1;
  const std::size_t dim = 2 * levels;
  // |g,n> -> n, |e,n> -> levels + n
  auto g = [](std::size_t n) { return static_cast<Eigen::Index>(n); };
  auto e = [levels](std::size_t n) { return static_cast<Eigen::Index>(levels + n); };

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const double half_w0 = 0.5 * params.omega0();
  for (std::size_t n = 0; n < levels; ++n) {
    const double field = params.omega() * static_cast<double>(n);
    h(g(n), g(n)) = -half_w0 + field;
    h(e(n), e(n)) = half_w0 + field;
  }
  // (lambda/2)(a^dag sigma_- + a sigma_+): |e,n> <-> |g,n+1> with amplitude sqrt(n+1).
  for (std::size_t n = 0; n + 1 < levels; ++n) {
    const double amp = 0.5 * params.lambda() * std::sqrt(static_cast<double>(n + 1));
    h(g(n + 1), e(n)) = amp;
    h(e(n), g(n + 1)) = amp;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw AccuracyError("oracle eigen-decomposition failed");
  const Eigen::MatrixXcd vecs = solver.eigenvectors().cast<std::complex<double>>();
  Eigen::VectorXcd phases(dim);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(dim); ++i) {
    phases(i) = std::exp(std::complex<double>(0.0, -solver.eigenvalues()(i) * t));
  }
  const Eigen::MatrixXcd u = vecs * phases.asDiagonal() * vecs.adjoint();

  const double eps = atom.epsilon();
  Eigen::VectorXd rho0(dim);
  for (std::size_t n = 0; n < levels; ++n) {
    const double p = n < cut.weights.size() ? cut.weights[n] : 0.0;
    rho0(g(n)) = (1.0 - eps) * p;
    rho0(e(n)) = eps * p;
  }
  const Eigen::MatrixXcd rho = u * rho0.cast<std::complex<double>>().asDiagonal() * u.adjoint();

  OracleResult out;
  out.unrepresented_mass = cut.tail_mass;
  out.cutoff_warning = cut.tail_mass > warn_tol;

  double excited = eps * cut.tail_mass;
  double ground = (1.0 - eps) * cut.tail_mass;
  out.field.weights.resize(levels);
  out.field.tail_mass = cut.tail_mass;
  for (std::size_t n = 0; n < levels; ++n) {
    const double pe = rho(e(n), e(n)).real();
    const double pg = rho(g(n), g(n)).real();
    excited += pe;
    ground += pg;
    out.field.weights[n] = pe + pg;
  }
  out.atom = {excited, ground};

  for (std::size_t n = 0; n < levels; ++n) {
    for (std::size_t m = n + 1; m < levels; ++m) {
      const std::complex<double> off = rho(g(n), g(m)) + rho(e(n), e(m));
      out.field_offdiag_max = std::max(out.field_offdiag_max, std::abs(off));
    }
  }

  out.coeff_A.resize(n_cut);
  out.coeff_C.resize(n_cut);
  out.coherence.resize(n_cut);
  for (std::size_t n = 0; n < n_cut; ++n) {
    out.coeff_A[n] = rho(e(n), e(n)).real();
    out.coeff_C[n] = rho(g(n + 1), g(n + 1)).real();
    out.coherence[n] = rho(e(n), g(n + 1));
  }
  return out;
}

}  // namespace jcmss
