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

// Experiment configuration: one JSON document with the sections rf, fso,
// interference, sweep, mc and numerics. Decibel values are converted to
// linear units here and nowhere else.

#include <cstdint>
#include <string>
#include <vector>

#include "rfso/channels.hpp"
#include "rfso/metrics.hpp"

namespace rfso::config {

enum class SweepVariable { mu_r_db, avg_snr_db, both_locked };

enum class Metric { op_exact, op_asymp, op_quad, op_mc, asr_exact, asr_asymp, asr_quad, asr_mc };

const char* to_string(Metric m) noexcept;
const char* to_string(SweepVariable v) noexcept;

struct SweepSpec {
    SweepVariable variable = SweepVariable::both_locked;
    double start_db = 0.0;
    double stop_db = 30.0;
    int points = 7;
    std::vector<Metric> metrics;
    std::int64_t mc_trials = 1000000;
    std::uint64_t seed = 1;

    std::vector<double> grid_db() const;
    bool wants(Metric m) const;
};

struct RunConfig {
    /// Base system; the swept SNRs are overwritten per grid point.
    channels::SystemConfig system;
    SweepSpec sweep;
    metrics::MetricsPolicy policy;
    /// 0 means not set in the file.
    int threads = 0;

    /// System at one grid point.
    channels::SystemConfig at(double db) const;
};

/// Turbulence presets: "moderate" and "second".
void apply_turbulence_preset(channels::FsoLinkParams& p, const std::string& name);

/// Throws Error(config) naming the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace rfso::config
