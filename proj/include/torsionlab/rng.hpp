#pragma once

#include <cstdint>
#include <random>

#include "torsionlab/error.hpp"

namespace torsionlab {

/// Independent random stream per (master seed, trial, purpose). Streams are
/// derived from the indices alone, so results never depend on which worker ran
/// which trial or in which order.
class TrialStream {
 public:
  TrialStream(std::uint64_t master_seed, std::uint64_t trial_index, std::uint32_t purpose = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(trial_index), static_cast<std::uint32_t>(trial_index >> 32),
                      purpose};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound) by rejection, identical on every platform.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw Error(Errc::InvalidInput, "empty sampling range");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    while (true) {
      const std::uint64_t x = engine_();
      if (x <= limit) return x % bound;
    }
  }

  /// Uniform integer in [-max_abs, max_abs].
  std::int64_t symmetric(std::int64_t max_abs) {
    return static_cast<std::int64_t>(below(static_cast<std::uint64_t>(2 * max_abs + 1))) - max_abs;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace torsionlab
