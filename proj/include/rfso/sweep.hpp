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

#include <string>
#include <vector>

#include "rfso/config.hpp"

namespace rfso::sweep {

struct Cell {
    bool requested = false;
    bool ok = false;
    double value = 0.0;
    /// Monte Carlo standard error; unused otherwise.
    double std_error = 0.0;
};

struct Row {
    double sweep_db = 0.0;
    Cell op_exact, op_asymp, op_quad, op_mc;
    Cell asr_exact, asr_asymp, asr_quad, asr_mc;
    /// Metric flags plus markers such as "error:op_exact".
    std::vector<std::string> flags;

    bool failed() const;
    Cell& cell(config::Metric m);
    const Cell& cell(config::Metric m) const;
};

struct SweepResult {
    std::vector<Row> rows;
    /// Human-readable notes for stderr (low MC trial counts and the like).
    std::vector<std::string> warnings;

    bool failed() const;
};

inline constexpr const char* kCsvHeader =
    "sweep_db,op_exact,op_asymp,op_quad,op_mc,op_mc_se,asr_exact,asr_asymp,asr_quad,asr_mc,asr_mc_se,flags";

/// Thread count from, in order of precedence: an explicit value (> 0), the
/// RFSO_THREADS environment variable, the config file, the OpenMP default.
int resolve_threads(int explicit_threads, const config::RunConfig& cfg);

/// Evaluates every requested metric at every grid point. Numeric failures
/// are recorded in the row flags; the sweep continues.
SweepResult run_sweep(const config::RunConfig& cfg, int threads);

std::string to_csv(const SweepResult& result);

struct Report {
    bool pass = false;
    std::string text;
};

/// Closed form vs quadrature vs simulation at every grid point, with the
/// acceptance tolerances. Covers the outage family if any op_* metric is
/// requested and the rate family if any asr_* metric is.
Report validate(const config::RunConfig& cfg, int threads);

}  // namespace rfso::sweep
