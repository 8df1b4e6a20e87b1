// SPDX-License-Identifier: Apache-2.0

#include "fakepath/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "fakepath/optimize.hpp"
#include "fakepath/rng.hpp"
#include "fakepath/sim.hpp"

namespace fakepath::estimation {

namespace {

constexpr std::uint64_t kTagBerTrial = 0xbe52;

Eigen::MatrixXcd grid_steering(steering::KernelOrder order, int grid_size) {
  Eigen::MatrixXcd a(order.n_antennas(), grid_size);
  for (int g = 0; g < grid_size; ++g) {
    a.col(g) = steering::steering_vector(order, torus::TorusPoint(static_cast<double>(g) / grid_size), 0);
  }
  return a;
}

int circular_gap(int i, int j, int n) {
  const int d = std::abs(i - j);
  return std::min(d, n - d);
}

torus::PathSet music_estimate_impl(steering::KernelOrder order, const SnapshotBlock& block,
                                   int n_sources, int grid_size, PeakPolicy policy,
                                   const Eigen::MatrixXcd* grid_matrix) {
  const int N = order.n_antennas();
  const auto T = block.snapshots.cols();
  if (T < 1) throw std::invalid_argument("music_estimate: at least one snapshot required");
  if (block.snapshots.rows() != N) {
    throw std::invalid_argument("music_estimate: snapshot length does not match antenna count");
  }
  if (n_sources < 1 || n_sources >= N) {
    throw std::invalid_argument("music_estimate: source count must satisfy 1 <= K < N");
  }
  if (grid_size < 4 * n_sources) {
    throw std::invalid_argument("music_estimate: grid too coarse for the source count");
  }

  const Eigen::MatrixXcd cov =
      (block.snapshots * block.snapshots.adjoint()) / static_cast<double>(T);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (cov + cov.adjoint()));
  const Eigen::MatrixXcd noise_basis = es.eigenvectors().leftCols(N - n_sources);

  Eigen::MatrixXcd local;
  if (grid_matrix == nullptr) {
    local = grid_steering(order, grid_size);
    grid_matrix = &local;
  }
  const Eigen::VectorXd den =
      (noise_basis.adjoint() * (*grid_matrix)).cwiseAbs2().colwise().sum();

  // circular local minima of ||Un^H v0||^2 (peaks of the pseudo-spectrum)
  std::vector<int> peaks;
  for (int i = 0; i < grid_size; ++i) {
    const double left = den[(i + grid_size - 1) % grid_size];
    const double right = den[(i + 1) % grid_size];
    if (den[i] <= left && den[i] < right) peaks.push_back(i);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) { return den[a] < den[b]; });

  std::vector<int> selected;
  const auto try_take = [&](int i) {
    for (int j : selected) {
      if (circular_gap(i, j, grid_size) <= 1) return;
    }
    selected.push_back(i);
  };
  for (int i : peaks) {
    if (static_cast<int>(selected.size()) == n_sources) break;
    try_take(i);
  }
  if (static_cast<int>(selected.size()) < n_sources) {
    if (policy == PeakPolicy::Strict) {
      throw PeakCountError("music_estimate: found only " + std::to_string(selected.size()) +
                               " separated peaks for " + std::to_string(n_sources) + " sources",
                           static_cast<int>(selected.size()));
    }
    std::vector<int> all(static_cast<std::size_t>(grid_size));
    std::iota(all.begin(), all.end(), 0);
    std::stable_sort(all.begin(), all.end(), [&](int a, int b) { return den[a] < den[b]; });
    for (int i : all) {
      if (static_cast<int>(selected.size()) == n_sources) break;
      try_take(i);
    }
  }

  const auto objective = [&](double t) {
    return (noise_basis.adjoint() * steering::steering_vector(order, torus::TorusPoint(t), 0))
        .squaredNorm();
  };
  const double step = 1.0 / grid_size;
  std::vector<double> refined;
  refined.reserve(selected.size());
  for (int i : selected) {
    // brackets of +-0.75 cells stay disjoint for peaks >= 2 cells apart
    const double lo = (i - 0.75) * step;
    const double hi = (i + 0.75) * step;
    refined.push_back(torus::TorusPoint::wrap(optimize::golden_minimize(objective, lo, hi, 1e-8)));
  }
  std::sort(refined.begin(), refined.end());
  return torus::PathSet::from_values(refined);
}

struct NormalSystem {
  Eigen::MatrixXcd gram;
  Eigen::VectorXcd rhs;
};

NormalSystem pilot_normal_equations(steering::KernelOrder order, const SnapshotBlock& block,
                                    const torus::PathSet& tau_hat) {
  if (!block.pilot_symbols.has_value()) {
    throw std::invalid_argument("ls_coefficients: pilot symbols required");
  }
  const auto L = static_cast<Eigen::Index>(tau_hat.size());
  const auto T = block.snapshots.cols();
  if (block.pilot_symbols->rows() != T || block.pilot_symbols->cols() != L) {
    throw std::invalid_argument("ls_coefficients: pilot matrix must be T x L");
  }
  const Eigen::MatrixXcd v0 = steering::vandermonde(order, tau_hat, 0);
  const Eigen::MatrixXcd g = v0.adjoint() * v0;
  NormalSystem sys{Eigen::MatrixXcd::Zero(L, L), Eigen::VectorXcd::Zero(L)};
  for (Eigen::Index t = 0; t < T; ++t) {
    const Eigen::VectorXd s = block.pilot_symbols->row(t);
    sys.gram += s.asDiagonal() * g * s.asDiagonal();
    sys.rhs += s.asDiagonal() * (v0.adjoint() * block.snapshots.col(t));
  }
  sys.gram = 0.5 * (sys.gram + sys.gram.adjoint());
  return sys;
}

}  // namespace

Eigen::VectorXcd remove_fake(steering::KernelOrder order, const Eigen::VectorXcd& y,
                             const torus::PathSet& fakes, const Eigen::VectorXcd& fake_coeffs) {
  if (y.size() != order.n_antennas()) {
    throw std::invalid_argument("remove_fake: observation length does not match antenna count");
  }
  if (static_cast<std::size_t>(fake_coeffs.size()) != fakes.size()) {
    throw std::invalid_argument("remove_fake: fake coefficient count does not match path count");
  }
  return y - steering::vandermonde(order, fakes, 0) * fake_coeffs;
}

torus::PathSet music_estimate(steering::KernelOrder order, const SnapshotBlock& block,
                              int n_sources, int grid_size, PeakPolicy policy) {
  return music_estimate_impl(order, block, n_sources, grid_size, policy, nullptr);
}

Eigen::VectorXcd ls_coefficients(steering::KernelOrder order, const SnapshotBlock& block,
                                 const torus::PathSet& tau_hat, RankPolicy policy) {
  const NormalSystem sys = pilot_normal_equations(order, block, tau_hat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sys.gram);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lmax = ev(ev.size() - 1);
  const double tol = 1e-12 * std::max(lmax, 0.0);
  if (policy == RankPolicy::Strict && !(ev(0) > tol)) {
    throw std::runtime_error("ls_coefficients: rank-deficient pilot system");
  }
  Eigen::VectorXd inv = ev;
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv[i] = (ev[i] > tol) ? 1.0 / ev[i] : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint() * sys.rhs;
}

Eigen::VectorXd ml_decode(steering::KernelOrder order, const Eigen::VectorXcd& y,
                          const torus::PathSet& tau_hat, const Eigen::VectorXcd& c_hat) {
  const auto L = static_cast<int>(tau_hat.size());
  if (L > 20) throw std::invalid_argument("ml_decode: exhaustive search limited to 20 paths");
  if (static_cast<std::size_t>(c_hat.size()) != tau_hat.size()) {
    throw std::invalid_argument("ml_decode: coefficient count does not match path count");
  }
  const Eigen::MatrixXcd a =
      steering::vandermonde(order, tau_hat, 0) * c_hat.asDiagonal();  // N x L
  Eigen::VectorXd best_bits = -Eigen::VectorXd::Ones(L);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd bits(L);
  const std::uint32_t count = 1u << L;
  for (std::uint32_t m = 0; m < count; ++m) {
    // lexicographic enumeration: bit L-1-l of m drives path l, -1 before +1
    for (int l = 0; l < L; ++l) bits[l] = ((m >> (L - 1 - l)) & 1u) != 0 ? 1.0 : -1.0;
    const double metric = (y - a * bits).squaredNorm();
    if (metric < best) {
      best = metric;
      best_bits = bits;
    }
  }
  return best_bits;
}

std::vector<std::size_t> greedy_wrap_match(const torus::PathSet& estimates,
                                           const torus::PathSet& reference) {
  if (estimates.size() != reference.size()) {
    throw std::invalid_argument("greedy_wrap_match: sets must have equal cardinality");
  }
  const std::size_t n = estimates.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      pairs.emplace_back(torus::wrap_distance(estimates[i], reference[j]), i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::size_t> match(n, n);
  std::vector<bool> est_used(n, false);
  std::vector<bool> ref_used(n, false);
  for (const auto& [d, i, j] : pairs) {
    if (est_used[i] || ref_used[j]) continue;
    match[i] = j;
    est_used[i] = true;
    ref_used[j] = true;
  }
  return match;
}

namespace {

struct TrialErrors {
  long bob = 0;
  long eve = 0;
  long csi = 0;
};

struct BerContext {
  steering::KernelOrder order;
  torus::PathSet taus;
  torus::PathSet fakes;
  torus::PathSet combined;  // taus then fakes
  Eigen::MatrixXcd v0_true;
  Eigen::MatrixXcd v0_fake;
  Eigen::MatrixXcd grid;
};

TrialErrors run_ber_trial(const BerConfig& config, const BerContext& ctx, double eta,
                          rng::Substream& stream) {
  const int N = config.n_antennas;
  const int L = config.n_paths;
  const int T = config.n_pilots;
  const double eta2 = eta * eta;

  // draw order is fixed: coefficients, fake phases, pilots, pilot noise,
  // then per data symbol (bits, jammer bits, noise)
  Eigen::VectorXcd c(L);
  for (int l = 0; l < L; ++l) c[l] = stream.cnormal(1.0);
  Eigen::VectorXcd cf(L);
  for (int l = 0; l < L; ++l) {
    const double phase = stream.uniform(0.0, 2.0 * std::numbers::pi);
    cf[l] = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  Eigen::MatrixXd pilots(T, L);
  for (int t = 0; t < T; ++t) {
    for (int l = 0; l < L; ++l) pilots(t, l) = stream.pm1();
  }
  const Eigen::VectorXcd fake_mean = ctx.v0_fake * cf;  // constant over the pilot phase
  Eigen::MatrixXcd y_pilot(N, T);
  for (int t = 0; t < T; ++t) {
    Eigen::VectorXcd y = ctx.v0_true * c.cwiseProduct(pilots.row(t).transpose().cast<std::complex<double>>());
    y += fake_mean;
    for (int i = 0; i < N; ++i) y[i] += stream.cnormal(eta2);
    y_pilot.col(t) = y;
  }

  // --- Bob: exact fake removal, MUSIC with L sources, joint LS ---
  Eigen::MatrixXcd y_bob = y_pilot;
  for (int t = 0; t < T; ++t) y_bob.col(t) -= fake_mean;
  SnapshotBlock bob_block{y_bob, std::nullopt};
  torus::PathSet bob_taus = music_estimate_impl(ctx.order, bob_block, L, config.music_grid,
                                                PeakPolicy::PadFromGrid, &ctx.grid);
  const std::vector<std::size_t> bob_user = greedy_wrap_match(bob_taus, ctx.taus);
  Eigen::MatrixXd bob_pilots(T, L);
  for (int i = 0; i < L; ++i) {
    bob_pilots.col(i) = pilots.col(static_cast<Eigen::Index>(bob_user[static_cast<std::size_t>(i)]));
  }
  bob_block.pilot_symbols = bob_pilots;
  const Eigen::VectorXcd bob_coeffs =
      ls_coefficients(ctx.order, bob_block, bob_taus, RankPolicy::MinimumNorm);

  // --- Eve: raw snapshots, MUSIC with 2L sources, oracle stream assignment ---
  SnapshotBlock eve_block{y_pilot, std::nullopt};
  torus::PathSet eve_taus = music_estimate_impl(ctx.order, eve_block, 2 * L, config.music_grid,
                                                PeakPolicy::PadFromGrid, &ctx.grid);
  const std::vector<std::size_t> eve_match = greedy_wrap_match(eve_taus, ctx.combined);
  std::vector<int> eve_user(static_cast<std::size_t>(2 * L));
  Eigen::MatrixXd eve_pilots(T, 2 * L);
  for (int i = 0; i < 2 * L; ++i) {
    eve_user[static_cast<std::size_t>(i)] = static_cast<int>(eve_match[static_cast<std::size_t>(i)]) % L;
    eve_pilots.col(i) = pilots.col(eve_user[static_cast<std::size_t>(i)]);
  }
  eve_block.pilot_symbols = eve_pilots;
  const Eigen::VectorXcd eve_coeffs =
      ls_coefficients(ctx.order, eve_block, eve_taus, RankPolicy::MinimumNorm);

  // Eve keeps the L paths with the largest |c| as the presumed users.
  std::vector<int> order_by_mag(static_cast<std::size_t>(2 * L));
  std::iota(order_by_mag.begin(), order_by_mag.end(), 0);
  std::stable_sort(order_by_mag.begin(), order_by_mag.end(), [&](int a, int b) {
    return std::abs(eve_coeffs[a]) > std::abs(eve_coeffs[b]);
  });
  std::vector<int> eve_sel(order_by_mag.begin(), order_by_mag.begin() + L);
  std::vector<torus::TorusPoint> eve_sel_pts;
  Eigen::VectorXcd eve_sel_coeffs(L);
  for (int i = 0; i < L; ++i) {
    eve_sel_pts.push_back(eve_taus[static_cast<std::size_t>(eve_sel[static_cast<std::size_t>(i)])]);
    eve_sel_coeffs[i] = eve_coeffs[eve_sel[static_cast<std::size_t>(i)]];
  }
  // selected paths may collide after padding; fall back to grid-distinct picks
  torus::PathSet eve_sel_set = ctx.taus;
  bool eve_ok = true;
  try {
    eve_sel_set = torus::PathSet(eve_sel_pts);
  } catch (const std::invalid_argument&) {
    eve_ok = false;  // degenerate CSI: decode with whatever magnitude order gave
  }

  // --- data phase ---
  TrialErrors errors;
  Eigen::VectorXd bits(L);
  for (int d = 0; d < config.n_data_symbols; ++d) {
    for (int l = 0; l < L; ++l) bits[l] = stream.pm1();
    Eigen::VectorXcd y_full = ctx.v0_true * c.cwiseProduct(bits.cast<std::complex<double>>());
    Eigen::VectorXcd jam = Eigen::VectorXcd::Zero(N);
    if (config.fake_in_data_phase) {
      Eigen::VectorXd jam_bits(L);
      for (int l = 0; l < L; ++l) jam_bits[l] = stream.pm1();
      jam = ctx.v0_fake * cf.cwiseProduct(jam_bits.cast<std::complex<double>>());
      y_full += jam;
    }
    for (int i = 0; i < N; ++i) y_full[i] += stream.cnormal(eta2);
    const Eigen::VectorXcd y_clean = y_full - jam;  // side channel: Bob and baseline

    const Eigen::VectorXd csi_bits = ml_decode(ctx.order, y_clean, ctx.taus, c);
    for (int l = 0; l < L; ++l) {
      if (csi_bits[l] != bits[l]) ++errors.csi;
    }

    const Eigen::VectorXd bob_bits = ml_decode(ctx.order, y_clean, bob_taus, bob_coeffs);
    for (int i = 0; i < L; ++i) {
      const auto u = bob_user[static_cast<std::size_t>(i)];
      if (bob_bits[i] != bits[static_cast<Eigen::Index>(u)]) ++errors.bob;
    }

    Eigen::VectorXd eve_bits;
    if (eve_ok) {
      eve_bits = ml_decode(ctx.order, y_full, eve_sel_set, eve_sel_coeffs);
    } else {
      eve_bits = Eigen::VectorXd::Ones(L);
    }
    for (int u = 0; u < L; ++u) {
      // the selected path with the largest |c| among those assigned to user u
      double guess = 1.0;
      double best_mag = -1.0;
      for (int i = 0; i < L; ++i) {
        const int path = eve_sel[static_cast<std::size_t>(i)];
        if (eve_user[static_cast<std::size_t>(path)] != u) continue;
        const double mag = std::abs(eve_coeffs[path]);
        if (mag > best_mag) {
          best_mag = mag;
          guess = eve_bits[i];
        }
      }
      if (guess != bits[u]) ++errors.eve;
    }
  }
  return errors;
}

}  // namespace

table::ExperimentTable ber_experiment(const BerConfig& config, const parallel::ExecPolicy& policy) {
  if (config.n_paths < 1 || config.n_paths > 20) {
    throw std::invalid_argument("ber_experiment: path count must be in 1..20");
  }
  if (2 * config.n_paths >= config.n_antennas) {
    throw std::invalid_argument("ber_experiment: needs 2L < N for Eve's noise subspace");
  }
  if (config.n_pilots < 1 || config.n_trials < 1 || config.n_data_symbols < 1) {
    throw std::invalid_argument("ber_experiment: counts must be positive");
  }
  if (!(config.delta_ratio > 0.0 && config.delta_ratio < 0.5)) {
    throw std::invalid_argument("ber_experiment: delta ratio must lie in (0, 1/2)");
  }
  if (config.snr_db_list.empty()) {
    throw std::invalid_argument("ber_experiment: SNR list must not be empty");
  }

  const int L = config.n_paths;
  const double Delta = 1.0 / L;
  const double delta = config.delta_ratio * Delta;
  BerContext ctx{steering::KernelOrder(config.n_antennas),
                 sim::equispaced_paths(L, Delta),
                 sim::equispaced_paths(L, Delta),  // placeholder, shifted below
                 sim::equispaced_paths(L, Delta),
                 Eigen::MatrixXcd(),
                 Eigen::MatrixXcd(),
                 Eigen::MatrixXcd()};
  {
    std::vector<torus::TorusPoint> fake_pts;
    std::vector<torus::TorusPoint> combined_pts = ctx.taus.points();
    for (int l = 0; l < L; ++l) {
      fake_pts.emplace_back(ctx.taus[static_cast<std::size_t>(l)].value() + delta);
      combined_pts.push_back(fake_pts.back());
    }
    ctx.fakes = torus::PathSet(fake_pts);
    ctx.combined = torus::PathSet(combined_pts);
  }
  ctx.v0_true = steering::vandermonde(ctx.order, ctx.taus, 0);
  ctx.v0_fake = steering::vandermonde(ctx.order, ctx.fakes, 0);
  ctx.grid = grid_steering(ctx.order, config.music_grid);

  const std::size_t n_snr = config.snr_db_list.size();
  const std::size_t n_trials = static_cast<std::size_t>(config.n_trials);
  std::vector<TrialErrors> slots(n_snr * n_trials);
  parallel::run_indexed(n_snr * n_trials, policy, [&](std::size_t idx) {
    const std::size_t si = idx / n_trials;
    const std::size_t t = idx % n_trials;
    const double eta = sim::noise_std_for_snr_db(L, config.n_antennas, config.snr_db_list[si]);
    rng::Substream stream(config.seed, {kTagBerTrial, si, t});
    slots[idx] = run_ber_trial(config, ctx, eta, stream);
  });

  table::ExperimentTable out({"snr_db", "ber_bob", "ber_eve", "ber_csi", "trials"});
  const double total_bits =
      static_cast<double>(config.n_trials) * config.n_data_symbols * config.n_paths;
  for (std::size_t si = 0; si < n_snr; ++si) {
    TrialErrors sum;
    for (std::size_t t = 0; t < n_trials; ++t) {
      sum.bob += slots[si * n_trials + t].bob;
      sum.eve += slots[si * n_trials + t].eve;
      sum.csi += slots[si * n_trials + t].csi;
    }
    table::ExperimentTable::RowBuilder row(5);
    row.num(config.snr_db_list[si])
        .num(sum.bob / total_bits)
        .num(sum.eve / total_bits)
        .num(sum.csi / total_bits)
        .num(static_cast<double>(config.n_trials));
    out.add_row(row.take());
  }
  out.add_metadata("eve_assignment", "oracle");
  out.add_metadata("data_symbols_per_point", static_cast<double>(config.n_trials) * config.n_data_symbols);
  return out;
}

}  // namespace fakepath::estimation
