#pragma once

#include <cstdint>

namespace spgm {

// Work accounting for one solver run. Counters live in the run context, not
// in any global state, so concurrent runs never share them.
//
// gradient_calls uses the pair convention for variance-reduced steps: a
// correction pair (component gradient at the live iterate minus the same
// component at the snapshot) counts as one call, since the snapshot side can
// be served from a per-epoch cache. raw_gradient_evals counts every component
// gradient actually computed, cache hits excluded, so the two fields agree
// exactly when the cache is enabled.
struct OpCounters {
  std::uint64_t gradient_calls = 0;
  std::uint64_t prox_g_calls = 0;
  std::uint64_t prox_h_calls = 0;
  std::uint64_t raw_gradient_evals = 0;
};

}  // namespace spgm
