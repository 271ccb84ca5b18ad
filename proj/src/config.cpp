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

#include "rfso/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rfso/errors.hpp"

namespace rfso::config {

using nlohmann::json;

namespace {

constexpr std::pair<Metric, const char*> kMetricNames[] = {
    {Metric::op_exact, "op_exact"},   {Metric::op_asymp, "op_asymp"},   {Metric::op_quad, "op_quad"},
    {Metric::op_mc, "op_mc"},         {Metric::asr_exact, "asr_exact"}, {Metric::asr_asymp, "asr_asymp"},
    {Metric::asr_quad, "asr_quad"},   {Metric::asr_mc, "asr_mc"},
};

double from_db(double v)
{
    return std::pow(10.0, v / 10.0);
}

[[noreturn]] void fail(const std::string& key, const std::string& what)
{
    throw Error(ErrorKind::config, "'" + key + "': " + what);
}

// Typed access to one section; remembers which keys were read so leftovers
// can be reported.
class Section {
public:
    Section(const json& root, std::string name) : name_(std::move(name))
    {
        if (!root.contains(name_))
            return;
        node_ = &root.at(name_);
        if (!node_->is_object())
            fail(name_, "expected an object");
    }

    bool has(const std::string& key) const { return node_ != nullptr && node_->contains(key); }

    double number(const std::string& key, double def)
    {
        const json* v = find(key);
        if (v == nullptr)
            return def;
        if (!v->is_number())
            fail(path(key), "expected a number");
        const double x = v->get<double>();
        if (!std::isfinite(x))
            fail(path(key), "must be finite");
        return x;
    }

    long long integer(const std::string& key, long long def)
    {
        const json* v = find(key);
        if (v == nullptr)
            return def;
        if (v->is_number_integer())
            return v->get<long long>();
        // Allow 1e6 style literals when they are whole numbers.
        if (v->is_number_float()) {
            const double x = v->get<double>();
            if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e18)
                return static_cast<long long>(x);
        }
        fail(path(key), "expected an integer");
    }

    std::string text(const std::string& key, const std::string& def)
    {
        const json* v = find(key);
        if (v == nullptr)
            return def;
        if (!v->is_string())
            fail(path(key), "expected a string");
        return v->get<std::string>();
    }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        if (node_ == nullptr || !node_->contains(key))
            return nullptr;
        return &node_->at(key);
    }

    std::string path(const std::string& key) const { return name_ + "." + key; }

    void finish() const
    {
        if (node_ == nullptr)
            return;
        for (const auto& [k, v] : node_->items())
            if (!seen_.count(k))
                fail(path(k), "unknown key");
    }

private:
    std::string name_;
    const json* node_ = nullptr;
    std::set<std::string> seen_;
};

int positive_int(Section& s, const std::string& key, long long def)
{
    const long long v = s.integer(key, def);
    if (v < 1 || v > 1000000)
        fail(s.path(key), "must be a positive integer");
    return static_cast<int>(v);
}

double positive(Section& s, const std::string& key, double def)
{
    const double v = s.number(key, def);
    if (!(v > 0.0))
        fail(s.path(key), "must be positive");
    return v;
}

}  // namespace

const char* to_string(Metric m) noexcept
{
    for (const auto& [k, name] : kMetricNames)
        if (k == m)
            return name;
    return "?";
}

const char* to_string(SweepVariable v) noexcept
{
    switch (v) {
    case SweepVariable::mu_r_db: return "mu_r_db";
    case SweepVariable::avg_snr_db: return "avg_snr_db";
    case SweepVariable::both_locked: return "both_locked";
    }
    return "?";
}

std::vector<double> SweepSpec::grid_db() const
{
    std::vector<double> out;
    for (int i = 0; i < points; ++i)
        out.push_back(start_db + (stop_db - start_db) * i / (points - 1));
    return out;
}

bool SweepSpec::wants(Metric m) const
{
    return std::find(metrics.begin(), metrics.end(), m) != metrics.end();
}

channels::SystemConfig RunConfig::at(double db) const
{
    channels::SystemConfig c = system;
    if (sweep.variable != SweepVariable::mu_r_db)
        c.rf.avg_snr = from_db(db);
    if (sweep.variable != SweepVariable::avg_snr_db)
        c.fso.mu_r = from_db(db);
    return c;
}

void apply_turbulence_preset(channels::FsoLinkParams& p, const std::string& name)
{
    if (name == "moderate") {
        p.alpha1 = 2.1;
        p.alpha2 = 2.0;
        p.beta1 = 4.0;
        p.beta2 = 4.5;
        p.omega1 = 1.0676;
        p.omega2 = 1.06;
    } else if (name == "second") {
        p.alpha1 = 2.169;
        p.alpha2 = 1.0;
        p.beta1 = 0.55;
        p.beta2 = 2.35;
        p.omega1 = 1.5793;
        p.omega2 = 1.0;
    } else {
        throw Error(ErrorKind::config, "'fso.turbulence': unknown preset '" + name + "' (use moderate or second)");
    }
}

RunConfig parse_config(const std::string& json_text)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::config, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw Error(ErrorKind::config, "top level must be an object");
    static const std::set<std::string> sections = {"rf", "fso", "interference", "sweep", "mc", "numerics"};
    for (const auto& [k, v] : root.items())
        if (!sections.count(k))
            fail(k, "unknown section");

    RunConfig cfg;
    auto& sys = cfg.system;

    Section rf(root, "rf");
    sys.rf.m_rf = positive_int(rf, "m", 2);
    sys.rf.num_users = positive_int(rf, "users", 1);
    sys.rf.avg_snr = from_db(rf.number("avg_snr_db", 10.0));
    rf.finish();

    Section fso(root, "fso");
    apply_turbulence_preset(sys.fso, fso.text("turbulence", "moderate"));
    sys.fso.alpha1 = positive(fso, "alpha1", sys.fso.alpha1);
    sys.fso.alpha2 = positive(fso, "alpha2", sys.fso.alpha2);
    sys.fso.beta1 = positive(fso, "beta1", sys.fso.beta1);
    sys.fso.beta2 = positive(fso, "beta2", sys.fso.beta2);
    sys.fso.omega1 = positive(fso, "omega1", sys.fso.omega1);
    sys.fso.omega2 = positive(fso, "omega2", sys.fso.omega2);
    if (fso.has("xi") && fso.has("pointing"))
        fail("fso.xi", "give either xi or pointing, not both");
    if (fso.has("xi")) {
        sys.fso.xi = positive(fso, "xi", 1.0);
    } else {
        const std::string preset = fso.text("pointing", "weak");
        try {
            sys.fso.xi = channels::pointing_preset_xi(preset);
        } catch (const Error&) {
            fail("fso.pointing", "unknown preset '" + preset + "' (use strong or weak)");
        }
    }
    const long long r = fso.integer("r", 1);
    if (r != 1 && r != 2)
        fail("fso.r", "must be 1 (heterodyne) or 2 (IM/DD)");
    sys.fso.r = static_cast<int>(r);
    sys.fso.mu_r = from_db(fso.number("mu_r_db", 10.0));
    fso.finish();

    Section in(root, "interference");
    sys.intf.num_interferers = positive_int(in, "count", 1);
    sys.intf.m1 = positive(in, "m1", 1.0);
    sys.intf.omega_i1 = from_db(in.number("omega_i1_db", 0.0));
    in.finish();

    Section sw(root, "sweep");
    const std::string var = sw.text("variable", "both_locked");
    if (var == "mu_r_db")
        cfg.sweep.variable = SweepVariable::mu_r_db;
    else if (var == "avg_snr_db")
        cfg.sweep.variable = SweepVariable::avg_snr_db;
    else if (var == "both_locked")
        cfg.sweep.variable = SweepVariable::both_locked;
    else
        fail("sweep.variable", "expected mu_r_db, avg_snr_db or both_locked");
    cfg.sweep.start_db = sw.number("start_db", 0.0);
    cfg.sweep.stop_db = sw.number("stop_db", 30.0);
    if (!(cfg.sweep.start_db < cfg.sweep.stop_db))
        fail("sweep.stop_db", "must exceed start_db");
    const long long pts = sw.integer("points", 7);
    if (pts < 2 || pts > 100000)
        fail("sweep.points", "must be at least 2");
    cfg.sweep.points = static_cast<int>(pts);
    sys.gamma_th = from_db(sw.number("gamma_th_db", 0.0));
    if (const json* m = sw.find("metrics")) {
        if (!m->is_array())
            fail("sweep.metrics", "expected an array of metric names");
        for (const auto& item : *m) {
            if (!item.is_string())
                fail("sweep.metrics", "expected metric names");
            const auto name = item.get<std::string>();
            auto it = std::find_if(std::begin(kMetricNames), std::end(kMetricNames),
                                   [&](const auto& p) { return name == p.second; });
            if (it == std::end(kMetricNames))
                fail("sweep.metrics", "unknown metric '" + name + "'");
            if (!cfg.sweep.wants(it->first))
                cfg.sweep.metrics.push_back(it->first);
        }
    }
    sw.finish();

    Section mc(root, "mc");
    cfg.sweep.mc_trials = mc.integer("trials", 1000000);
    if (cfg.sweep.mc_trials < 10000)
        fail("mc.trials", "must be at least 10000");
    const long long seed = mc.integer("seed", 1);
    if (seed < 0)
        fail("mc.seed", "must be non-negative");
    cfg.sweep.seed = static_cast<std::uint64_t>(seed);
    mc.finish();

    Section nu(root, "numerics");
    cfg.policy.quad_tolerance = positive(nu, "quad_tolerance", cfg.policy.quad_tolerance);
    cfg.policy.delta = positive(nu, "delta", 1.0);
    cfg.policy.contour.log_negligible = nu.number("log_negligible", cfg.policy.contour.log_negligible);
    sys.max_denominator = positive_int(nu, "max_denominator", sys.max_denominator);
    const long long threads = nu.integer("threads", 0);
    if (threads < 0 || threads > 4096)
        fail("numerics.threads", "must be between 0 and 4096");
    cfg.threads = static_cast<int>(threads);
    nu.finish();

    try {
        sys.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::config, e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::config, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace rfso::config
