// SPDX-License-Identifier: Apache-2.0
//
// Fisher information matrices for the four receiver scenarios, CRB blocks
// via two independent inversion routes (full eigendecomposition inverse and
// Schur complement), extremal eigenvalues, and the statistical privacy
// margin.
//
// FIMs follow the complex form J = eta^-2 D^H Gram D where D carries the
// channel coefficients; parameter ordering for the full scenarios is
// (c_1..c_L, u_1..u_L, fc_1..fc_L, fu_1..fu_L) with the normalized AoA
// parameters u_l = sqrt(-D_N''(0)) tau_l.

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fakepath/steering.hpp"
#include "fakepath/torus.hpp"

namespace fakepath::crb {

enum class Receiver { Bob, Eve };
enum class Scenario { BobAoA, EveAoA, BobFull, EveFull };

/// Full description of one synthetic propagation scene.
struct ChannelScene {
  ChannelScene(torus::PathSet taus_in, std::optional<torus::PathSet> fakes_in,
               Eigen::VectorXcd coeffs_in, Eigen::VectorXcd fake_coeffs_in,
               double noise_std_in, steering::KernelOrder order_in);

  torus::PathSet taus;
  std::optional<torus::PathSet> fakes;
  Eigen::VectorXcd coeffs;
  Eigen::VectorXcd fake_coeffs;
  double noise_std;
  steering::KernelOrder order;

  std::size_t n_paths() const { return taus.size(); }
  double coeff_min_abs() const;
  double coeff_max_abs() const;
};

struct FimMatrix {
  Eigen::MatrixXcd matrix;
  std::vector<std::string> labels;
  std::optional<Scenario> scenario;
  bool coincident_columns = false;  // warning: fake and true paths overlap
};

struct CrbReport {
  Eigen::MatrixXcd crb_block;
  std::vector<std::string> labels;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  std::optional<Scenario> scenario;
};

/// Raised when a FIM is rank deficient at working precision; carries the
/// near-null eigenvalue.
class SingularFimError : public std::runtime_error {
 public:
  SingularFimError(const std::string& what, double near_null)
      : std::runtime_error(what), near_null_eigenvalue(near_null) {}
  double near_null_eigenvalue;
};

/// AoA-only FIM with known channel coefficients.
/// Bob (fakes removed over the side channel): L x L on tau.
/// Eve: 2L x 2L on the stacked (tau, fake tau).
FimMatrix fim_aoa_known_coeffs(const ChannelScene& scene, Receiver receiver);

/// Joint coefficient/AoA FIM on theta = (c, u).
/// Bob: 2L x 2L; Eve: 4L x 4L on (c, u, fc, fu).
FimMatrix fim_full(const ChannelScene& scene, Receiver receiver);

/// Sub-block of FIM^-1 on the requested labels. Computed both through the
/// full eigendecomposition inverse and through the inverse Schur complement
/// of the complementary block; the routes must agree to 1e-8 relative.
/// Rank tolerance for singularity: lambda_min <= 1e-12 lambda_max.
CrbReport crb_block(const FimMatrix& fim, const std::vector<std::string>& subset);

/// (lambda_min, lambda_max) of a Hermitian matrix; for 1 x 1 the entry twice.
std::pair<double, double> extremal_eigenvalues(const Eigen::MatrixXcd& m);

/// gamma = lambda_min(CRB_E) / lambda_max(CRB_B).
double privacy_margin(const CrbReport& crb_eve, const CrbReport& crb_bob);

/// Label helpers matching the fixed parameter ordering.
std::vector<std::string> aoa_labels(std::size_t n_paths, bool fake);
std::vector<std::string> full_labels(std::size_t n_paths, bool fake);

}  // namespace fakepath::crb
