// SPDX-License-Identifier: Apache-2.0

#include "fakepath/crb.hpp"

#include <algorithm>
#include <cmath>

namespace fakepath::crb {

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr double kRouteAgreement = 1e-8;

void check_hermitian(const Eigen::MatrixXcd& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-10 * scale) {
    throw std::invalid_argument(std::string(who) + ": matrix not Hermitian within tolerance");
  }
}

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

Eigen::VectorXcd stack(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() + b.size());
  out << a, b;
  return out;
}

bool has_coincident_paths(const torus::PathSet& taus, const torus::PathSet& fakes) {
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = 0; j < fakes.size(); ++j) {
      if (torus::wrap_distance(taus[i], fakes[j]) == 0.0) return true;
    }
  }
  return false;
}

const torus::PathSet& require_fakes(const ChannelScene& scene, const char* who) {
  if (!scene.fakes.has_value()) {
    throw std::invalid_argument(std::string(who) + ": Eve scenario requires fake paths");
  }
  return *scene.fakes;
}

void require_informative(const ChannelScene& scene, const char* who) {
  if (!(scene.noise_std > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": noise level must be positive");
  }
  if (!(scene.coeff_min_abs() > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": coefficients must be nonzero");
  }
}

}  // namespace

ChannelScene::ChannelScene(torus::PathSet taus_in, std::optional<torus::PathSet> fakes_in,
                           Eigen::VectorXcd coeffs_in, Eigen::VectorXcd fake_coeffs_in,
                           double noise_std_in, steering::KernelOrder order_in)
    : taus(std::move(taus_in)),
      fakes(std::move(fakes_in)),
      coeffs(std::move(coeffs_in)),
      fake_coeffs(std::move(fake_coeffs_in)),
      noise_std(noise_std_in),
      order(order_in) {
  if (static_cast<std::size_t>(coeffs.size()) != taus.size()) {
    throw std::invalid_argument("ChannelScene: coefficient count must match path count");
  }
  const std::size_t n_fakes = fakes.has_value() ? fakes->size() : 0;
  if (static_cast<std::size_t>(fake_coeffs.size()) != n_fakes) {
    throw std::invalid_argument("ChannelScene: fake coefficient count must match fake path count");
  }
  // eta = 0 and zero coefficients are allowed here so noiseless scenes can
  // be synthesized; information-matrix operations reject them
  if (!(noise_std >= 0.0)) {
    throw std::invalid_argument("ChannelScene: noise level must be nonnegative");
  }
}

double ChannelScene::coeff_min_abs() const { return coeffs.cwiseAbs().minCoeff(); }
double ChannelScene::coeff_max_abs() const { return coeffs.cwiseAbs().maxCoeff(); }

std::vector<std::string> aoa_labels(std::size_t n_paths, bool fake) {
  std::vector<std::string> labels;
  labels.reserve(n_paths);
  for (std::size_t l = 1; l <= n_paths; ++l) {
    labels.push_back((fake ? "ftau_" : "tau_") + std::to_string(l));
  }
  return labels;
}

std::vector<std::string> full_labels(std::size_t n_paths, bool fake) {
  std::vector<std::string> labels;
  labels.reserve(2 * n_paths);
  for (std::size_t l = 1; l <= n_paths; ++l) {
    labels.push_back((fake ? "fc_" : "c_") + std::to_string(l));
  }
  for (std::size_t l = 1; l <= n_paths; ++l) {
    labels.push_back((fake ? "fu_" : "u_") + std::to_string(l));
  }
  return labels;
}

FimMatrix fim_aoa_known_coeffs(const ChannelScene& scene, Receiver receiver) {
  require_informative(scene, "fim_aoa_known_coeffs");
  const double inv_eta2 = 1.0 / (scene.noise_std * scene.noise_std);
  if (receiver == Receiver::Bob) {
    const Eigen::MatrixXcd v1 = steering::vandermonde(scene.order, scene.taus, 1);
    const Eigen::MatrixXcd dc = scene.coeffs.asDiagonal();
    FimMatrix fim;
    fim.matrix = hermitize(inv_eta2 * dc.adjoint() * (v1.adjoint() * v1) * dc);
    fim.labels = aoa_labels(scene.n_paths(), false);
    fim.scenario = Scenario::BobAoA;
    return fim;
  }
  const torus::PathSet& fakes = require_fakes(scene, "fim_aoa_known_coeffs");
  Eigen::MatrixXcd v1(scene.order.n_antennas(),
                      static_cast<Eigen::Index>(scene.n_paths() + fakes.size()));
  v1.leftCols(static_cast<Eigen::Index>(scene.n_paths())) =
      steering::vandermonde(scene.order, scene.taus, 1);
  v1.rightCols(static_cast<Eigen::Index>(fakes.size())) =
      steering::vandermonde(scene.order, fakes, 1);
  const Eigen::VectorXcd call = stack(scene.coeffs, scene.fake_coeffs);
  const Eigen::MatrixXcd dc = call.asDiagonal();
  FimMatrix fim;
  fim.matrix = hermitize(inv_eta2 * dc.adjoint() * (v1.adjoint() * v1) * dc);
  fim.labels = aoa_labels(scene.n_paths(), false);
  const auto fake_names = aoa_labels(fakes.size(), true);
  fim.labels.insert(fim.labels.end(), fake_names.begin(), fake_names.end());
  fim.scenario = Scenario::EveAoA;
  fim.coincident_columns = has_coincident_paths(scene.taus, fakes);
  return fim;
}

FimMatrix fim_full(const ChannelScene& scene, Receiver receiver) {
  require_informative(scene, "fim_full");
  const double inv_eta2 = 1.0 / (scene.noise_std * scene.noise_std);
  const auto L = static_cast<Eigen::Index>(scene.n_paths());
  const auto coeff_block = [](const Eigen::VectorXcd& c) {
    Eigen::VectorXcd d(2 * c.size());
    d.head(c.size()).setOnes();
    d.tail(c.size()) = c;
    return d;
  };
  if (receiver == Receiver::Bob) {
    const Eigen::MatrixXcd w = steering::concat_w(scene.order, scene.taus);
    const Eigen::MatrixXcd dg = coeff_block(scene.coeffs).asDiagonal();
    FimMatrix fim;
    fim.matrix = hermitize(inv_eta2 * dg.adjoint() * (w.adjoint() * w) * dg);
    fim.labels = full_labels(scene.n_paths(), false);
    fim.scenario = Scenario::BobFull;
    return fim;
  }
  const torus::PathSet& fakes = require_fakes(scene, "fim_full");
  const auto Lf = static_cast<Eigen::Index>(fakes.size());
  Eigen::MatrixXcd w(scene.order.n_antennas(), 2 * L + 2 * Lf);
  w.leftCols(2 * L) = steering::concat_w(scene.order, scene.taus);
  w.rightCols(2 * Lf) = steering::concat_w(scene.order, fakes);
  Eigen::VectorXcd d(2 * L + 2 * Lf);
  d << coeff_block(scene.coeffs), coeff_block(scene.fake_coeffs);
  const Eigen::MatrixXcd dg = d.asDiagonal();
  FimMatrix fim;
  fim.matrix = hermitize(inv_eta2 * dg.adjoint() * (w.adjoint() * w) * dg);
  fim.labels = full_labels(scene.n_paths(), false);
  const auto fake_names = full_labels(fakes.size(), true);
  fim.labels.insert(fim.labels.end(), fake_names.begin(), fake_names.end());
  fim.scenario = Scenario::EveFull;
  fim.coincident_columns = has_coincident_paths(scene.taus, fakes);
  return fim;
}

std::pair<double, double> extremal_eigenvalues(const Eigen::MatrixXcd& m) {
  check_hermitian(m, "extremal_eigenvalues");
  if (m.rows() == 1) {
    const double v = m(0, 0).real();
    return {v, v};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

CrbReport crb_block(const FimMatrix& fim, const std::vector<std::string>& subset) {
  check_hermitian(fim.matrix, "crb_block");
  if (subset.empty()) {
    throw std::invalid_argument("crb_block: empty label subset");
  }
  std::vector<Eigen::Index> sel;
  sel.reserve(subset.size());
  for (const auto& name : subset) {
    const auto it = std::find(fim.labels.begin(), fim.labels.end(), name);
    if (it == fim.labels.end()) {
      throw std::invalid_argument("crb_block: unknown label '" + name + "'");
    }
    sel.push_back(static_cast<Eigen::Index>(it - fim.labels.begin()));
  }

  const Eigen::Index n = fim.matrix.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(fim.matrix);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lmax = ev(n - 1);
  const double lmin = ev(0);
  if (!(lmin > kRankTolerance * std::max(lmax, 0.0))) {
    throw SingularFimError("crb_block: singular FIM, near-null eigenvalue " + std::to_string(lmin),
                           lmin);
  }

  // Route 1: full inverse through the eigendecomposition.
  const Eigen::MatrixXcd inv =
      es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  const auto k = static_cast<Eigen::Index>(sel.size());
  Eigen::MatrixXcd block_full(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) block_full(i, j) = inv(sel[i], sel[j]);
  }

  // Route 2: inverse Schur complement of the complementary block.
  Eigen::MatrixXcd block_schur;
  if (k == n) {
    block_schur = inv;
  } else {
    std::vector<Eigen::Index> rest;
    rest.reserve(n - k);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::find(sel.begin(), sel.end(), i) == sel.end()) rest.push_back(i);
    }
    const auto r = static_cast<Eigen::Index>(rest.size());
    Eigen::MatrixXcd a(k, k), b(k, r), d(r, r);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) a(i, j) = fim.matrix(sel[i], sel[j]);
      for (Eigen::Index j = 0; j < r; ++j) b(i, j) = fim.matrix(sel[i], rest[j]);
    }
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) d(i, j) = fim.matrix(rest[i], rest[j]);
    }
    const Eigen::MatrixXcd schur = hermitize(a - b * d.ldlt().solve(b.adjoint()));
    block_schur = hermitize(schur.ldlt().solve(Eigen::MatrixXcd::Identity(k, k)));
  }

  const double rel = (block_full - block_schur).norm() / std::max(block_schur.norm(), 1e-300);
  if (rel > kRouteAgreement) {
    throw std::runtime_error("crb_block: inversion routes disagree (relative deviation " +
                             std::to_string(rel) + ")");
  }

  CrbReport report;
  report.crb_block = hermitize(block_schur);
  report.labels = subset;
  std::tie(report.lambda_min, report.lambda_max) = extremal_eigenvalues(report.crb_block);
  report.scenario = fim.scenario;
  return report;
}

double privacy_margin(const CrbReport& crb_eve, const CrbReport& crb_bob) {
  if (!(crb_eve.lambda_min > 0.0) || !(crb_bob.lambda_max > 0.0)) {
    throw std::invalid_argument("privacy_margin: CRB eigenvalues must be positive");
  }
  return crb_eve.lambda_min / crb_bob.lambda_max;
}

}  // namespace fakepath::crb
