// SPDX-License-Identifier: Apache-2.0
//
// Wall-clock comparison of the serial reference path (threads = 1) against
// the OpenMP path (threads = 0) for the Monte-Carlo kernels. Also verifies
// that both paths produce identical CSV output.

#include <chrono>
#include <cstdio>
#include <string>

#include "fakepath/bounds.hpp"
#include "fakepath/estimation.hpp"
#include "fakepath/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& fn) {
  const auto t0 = Clock::now();
  fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx   identical %s\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms, identical ? "yes" : "NO");
}

}  // namespace

int main() {
  using fakepath::parallel::ExecPolicy;
  const ExecPolicy serial{1};
  const ExecPolicy parallel{0};

  {
    const fakepath::steering::KernelOrder order(63);
    double a = 0.0;
    double b = 0.0;
    const double ts =
        time_ms([&] { a = fakepath::bounds::dirichlet_envelope_check(order, 2, 200000, serial); });
    const double tp = time_ms(
        [&] { b = fakepath::bounds::dirichlet_envelope_check(order, 2, 200000, parallel); });
    report("envelope_check", ts, tp, a == b);
  }

  {
    fakepath::sim::SweepConfig config;
    config.delta_ratios = {0.02, 0.05, 0.1, 0.2, 0.3, 0.4};
    config.n_trials = 400;
    config.seed = 7;
    std::string a;
    std::string b;
    const double ts =
        time_ms([&] { a = fakepath::sim::mc_crb_realizations(config, serial).to_csv(); });
    const double tp =
        time_ms([&] { b = fakepath::sim::mc_crb_realizations(config, parallel).to_csv(); });
    report("mc_crb_realizations", ts, tp, a == b);
  }

  {
    fakepath::estimation::BerConfig config;
    config.snr_db_list = {0.0, 10.0, 20.0};
    config.n_trials = 12;
    config.n_data_symbols = 32;
    config.seed = 7;
    config.fake_in_data_phase = true;
    std::string a;
    std::string b;
    const double ts =
        time_ms([&] { a = fakepath::estimation::ber_experiment(config, serial).to_csv(); });
    const double tp =
        time_ms([&] { b = fakepath::estimation::ber_experiment(config, parallel).to_csv(); });
    report("ber_experiment", ts, tp, a == b);
  }

  return 0;
}
