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

// rfso sweep <config.json> [--out file.csv] [--seed N] [--threads N]
// rfso validate <config.json> [--seed N] [--threads N]
//
// Exit codes: 0 success, 1 numeric failure (or a failed validation),
// 2 usage or configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "rfso/config.hpp"
#include "rfso/errors.hpp"
#include "rfso/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNumeric = 1;
constexpr int kUsage = 2;

struct Args {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

rfso::config::RunConfig load(const Args& a)
{
    auto cfg = rfso::config::load_config(a.config);
    if (a.seed)
        cfg.sweep.seed = *a.seed;
    if (cfg.sweep.metrics.empty())
        throw rfso::Error(rfso::ErrorKind::config, "'sweep.metrics': no metric requested");
    return cfg;
}

int run_sweep(const Args& a)
{
    const auto cfg = load(a);
    const int threads = rfso::sweep::resolve_threads(a.threads, cfg);
    const auto res = rfso::sweep::run_sweep(cfg, threads);
    for (const auto& w : res.warnings)
        std::cerr << "warning: " << w << '\n';
    const std::string csv = rfso::sweep::to_csv(res);
    if (a.out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!(f << csv))
            throw rfso::Error(rfso::ErrorKind::config, "cannot write " + a.out);
    }
    int failures = 0;
    for (const auto& r : res.rows)
        failures += r.failed() ? 1 : 0;
    std::cerr << res.rows.size() << " grid points, " << failures << " with numeric failures\n";
    return failures ? kNumeric : kOk;
}

int run_validate(const Args& a)
{
    const auto cfg = load(a);
    const auto rep = rfso::sweep::validate(cfg, rfso::sweep::resolve_threads(a.threads, cfg));
    std::cout << rep.text;
    return rep.pass ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Outage and sum-rate sweeps for mixed RF/FSO two-way relaying under interference"};
    app.require_subcommand(1);
    Args a;
    auto common = [&](CLI::App* sub) {
        sub->add_option("config", a.config, "JSON configuration file")->required();
        sub->add_option("--seed", a.seed, "Monte Carlo seed (overrides mc.seed)");
        sub->add_option("--threads", a.threads, "Worker threads (overrides RFSO_THREADS)")->check(CLI::PositiveNumber);
    };
    auto* sweep = app.add_subcommand("sweep", "Evaluate the requested metrics over the SNR grid and write CSV");
    common(sweep);
    sweep->add_option("--out", a.out, "CSV output file (default: stdout)");
    auto* validate = app.add_subcommand("validate", "Cross-check closed forms, quadrature and simulation");
    common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    try {
        return sweep->parsed() ? run_sweep(a) : run_validate(a);
    } catch (const rfso::Error& e) {
        std::cerr << "rfso: " << e.what() << '\n';
        return e.kind() == rfso::ErrorKind::config ? kUsage : kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "rfso: " << e.what() << '\n';
        return kNumeric;
    }
}
