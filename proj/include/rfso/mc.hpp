/*
   Copyright 2026 The rfso Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Seeded Monte Carlo over the physical channel model. Trials are cut into
// fixed-size substreams; stream i draws from its own generator seeded by
// hash(seed, i) and the per-stream moments are merged in stream order, so
// the estimate does not depend on the number of threads.

#include <cstdint>

#include "rfso/channels.hpp"

namespace rfso::mc {

struct McEstimate {
    double mean = 0.0;
    /// Sample standard deviation / sqrt(n_samples).
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

inline constexpr std::int64_t kMinTrials = 10000;
inline constexpr std::int64_t kStreamSize = 1 << 14;

struct McOptions {
    /// false runs the serial reference loop.
    bool parallel = true;
    /// 0 leaves the OpenMP default.
    int threads = 0;
};

/// splitmix64 finalizer applied to seed and stream index.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// Fraction of trials with min(g_RF, g_FSO) / g_I < gamma_th.
McEstimate simulate_outage(const channels::SystemConfig& cfg, std::int64_t n, std::uint64_t seed,
                           const McOptions& options = {});

/// Mean of (log2(1 + g_RF/g_I) + log2(1 + g_FSO/g_I)) / 2 with one g_I per trial.
McEstimate simulate_asr(const channels::SystemConfig& cfg, std::int64_t n, std::uint64_t seed,
                        const McOptions& options = {});

/// Trials needed for about 100 expected outage events at level p.
std::int64_t recommended_trials(double p);

}  // namespace rfso::mc
