#pragma once

// Experiment runner behind `dchaos run`: config parsing, per-pair jobs and
// report assembly.  A run produces a map file name -> contents, so the same
// config and seed always give byte-identical output regardless of --jobs.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dchaos/bss.hpp"
#include "dchaos/cantorwheel.hpp"
#include "dchaos/chaoscore.hpp"
#include "dchaos/fiberlab.hpp"
#include "dchaos/rational.hpp"
#include "dchaos/telescope.hpp"

#ifndef DCHAOS_VERSION
#define DCHAOS_VERSION "0.0.0"
#endif

namespace dchaos::runner {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string system;
    std::vector<Rational> deltas;
    Rational tolerance{1, 20};
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> horizon;
    json params;  // system-specific section, kept verbatim for the manifest
};

inline Rational rational_field(const json& v, const std::string& what) {
    try {
        if (v.is_string()) return Rational::parse(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    } catch (const std::exception& e) {
        throw ConfigError(what + ": " + e.what());
    }
    throw ConfigError(what + ": rationals are written as \"num/den\" strings or integers");
}

inline ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    ExperimentConfig c;
    if (!j.contains("system") || !j["system"].is_string()) throw ConfigError("config: missing \"system\"");
    c.system = j["system"].get<std::string>();
    static const std::vector<std::string> systems = {"bss", "telescope", "cantorwheel", "fiberlab"};
    if (std::find(systems.begin(), systems.end(), c.system) == systems.end()) {
        throw ConfigError("config: unknown system \"" + c.system + "\"");
    }
    if (!j.contains("deltas") || !j["deltas"].is_array() || j["deltas"].empty()) {
        throw ConfigError("config: \"deltas\" must be a nonempty array");
    }
    for (const auto& d : j["deltas"]) c.deltas.push_back(rational_field(d, "deltas"));
    for (std::size_t i = 0; i < c.deltas.size(); ++i) {
        if (c.deltas[i] <= Rational(0)) throw ConfigError("config: deltas must be positive");
        if (i > 0 && c.deltas[i] <= c.deltas[i - 1]) throw ConfigError("config: deltas must be strictly increasing");
    }
    if (j.contains("tolerance")) c.tolerance = rational_field(j["tolerance"], "tolerance");
    if (c.tolerance < Rational(0) || c.tolerance >= Rational(1, 4)) throw ConfigError("config: tolerance outside [0, 1/4)");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("config: seed must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("horizon")) {
        if (!j["horizon"].is_number_unsigned()) throw ConfigError("config: horizon must be a positive integer");
        c.horizon = j["horizon"].get<std::uint64_t>();
        if (*c.horizon == 0) throw ConfigError("config: horizon must be positive");
    }
    c.params = j.contains("params") ? j["params"] : json::object();
    if (!c.params.is_object()) throw ConfigError("config: \"params\" must be an object");
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return parse_config(j);
}

using Files = std::map<std::string, std::string>;

// Runs jobs[i] for every i, at most `jobs` at a time; results keep job order.
inline std::vector<Files> run_jobs(const std::vector<std::function<Files()>>& tasks, unsigned jobs) {
    std::vector<Files> out(tasks.size());
    std::vector<std::string> errors(tasks.size());
    if (jobs <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
        return out;
    }
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next == tasks.size()) return;
                i = next++;
            }
            try {
                out[i] = tasks[i]();
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, tasks.size()); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (!e.empty()) throw std::runtime_error(e);
    }
    return out;
}

inline std::string pair_name(std::size_t id) {
    std::string s = std::to_string(id);
    return "pair_" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

inline Files pair_files(std::size_t id, const DistributionProfile& profile, const Rational& tol,
                        const std::string& header) {
    const PairVerdict v = classify_pair(profile, tol);
    return {{pair_name(id) + ".csv", profile_csv(profile)},
            {pair_name(id) + ".verdict", header + profile_report(profile) + verdict_record(v)}};
}

namespace detail {

inline std::string fmt_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline telescope::TelescopePoint telescope_point(const json& j) {
    using namespace telescope;
    if (!j.is_object()) throw ConfigError("telescope: point must be an object");
    TelescopePoint p;
    const std::string col = j.value("column", "inner");
    if (col != "inner" && col != "outer") throw ConfigError("telescope: column must be inner or outer");
    p.column = col == "inner" ? Column::inner : Column::outer;
    p.phi = Angle(rational_field(j.value("phi", json("0")), "telescope phi"));
    p.height = j.value("height", std::uint64_t{1});
    const std::string space = j.value("space", "Y");
    if (space != "X" && space != "Y") throw ConfigError("telescope: space must be X or Y");
    p.lifted = space == "Y";
    return p;
}

inline std::string telescope_point_str(const telescope::TelescopePoint& p) {
    return std::string(p.column == telescope::Column::inner ? "inner" : "outer") + " phi=" + p.phi.value().str() +
           " height=" + std::to_string(p.height) + " space=" + (p.lifted ? "Y" : "X");
}

inline fiberlab::FiberPoint fiber_point(const json& j) {
    if (!j.is_object()) throw ConfigError("fiberlab: point must be an object");
    fiberlab::FiberPoint p;
    p.k = j.value("k", std::uint64_t{1});
    p.z = rational_field(j.value("z", json("0")), "fiberlab z").to_double();
    if (p.z < 0 || p.z > 1) throw ConfigError("fiberlab: z outside [0, 1]");
    return p;
}

}  // namespace detail

inline Files run_telescope(const ExperimentConfig& c, unsigned jobs) {
    using namespace telescope;
    const std::uint64_t horizon = c.horizon.value_or(block_bounds(8));
    unsigned K = 0;
    try {
        K = horizon_block(horizon);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("telescope: ") + e.what());
    }
    if (K < 3) throw ConfigError("telescope: horizon must be at least l_3");
    std::vector<std::pair<TelescopePoint, TelescopePoint>> pairs;
    if (c.params.contains("pairs")) {
        for (const auto& pj : c.params["pairs"]) {
            pairs.emplace_back(detail::telescope_point(pj.at("a")), detail::telescope_point(pj.at("b")));
        }
    } else {
        const TelescopePoint base{Column::inner, Angle{}, 1, true};
        pairs = {{base, {Column::outer, Angle{}, 1, true}},
                 {base, {Column::inner, Angle(1, 3), 1, true}},
                 {base, {Column::inner, Angle{}, 2, true}},
                 {base, {Column::inner, Angle(1, 32), 0, true}},
                 {{Column::outer, Angle{}, 1, true}, {Column::outer, Angle(1, 32), 0, true}},
                 {{Column::outer, Angle{}, 1, true}, {Column::outer, Angle{}, 2, true}},
                 {{Column::inner, Angle{}, 1, false}, {Column::outer, Angle{}, 1, false}}};
    }
    const std::vector<std::uint64_t> checkpoints = {block_bounds(K - 1), horizon};
    std::vector<std::function<Files()>> tasks;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        tasks.emplace_back([&, i] {
            const auto& [a, b] = pairs[i];
            std::string header = "a: " + detail::telescope_point_str(a) + "\nb: " + detail::telescope_point_str(b) + '\n';
            if (a.lifted && b.lifted && !(a == b)) header += "case: " + to_string(case_label(a, b)) + '\n';
            try {
                return pair_files(i, pair_profile(a, b, c.deltas, checkpoints, 0), c.tolerance, header);
            } catch (const std::overflow_error& e) {
                throw std::overflow_error(std::string("telescope: ") + e.what());
            }
        });
    }
    Files out;
    for (auto& f : run_jobs(tasks, jobs)) out.merge(f);
    json extra = {{"horizon", horizon}, {"block", K}, {"checkpoints", checkpoints}, {"burn_in", 0}};
    out["run.json"] = extra.dump(2) + '\n';
    return out;
}

inline Files run_cantorwheel(const ExperimentConfig& c, unsigned jobs) {
    using namespace cantorwheel;
    const auto sched = WheelSchedule::standard(c.params.value("blocks", std::size_t{7}));
    const std::uint64_t horizon = c.horizon.value_or(sched.limit());
    if (horizon > sched.limit()) {
        throw ConfigError("cantorwheel: horizon " + std::to_string(horizon) + " beyond schedule limit " +
                          std::to_string(sched.limit()));
    }
    std::vector<std::uint64_t> checkpoints;
    for (std::size_t m = 1; m <= sched.blocks(); ++m) {
        if (sched.s(m) <= horizon) checkpoints.push_back(sched.s(m));
    }
    if (checkpoints.empty() || checkpoints.back() != horizon) checkpoints.push_back(horizon);
    const std::size_t burn_in = c.params.value("burn_in", std::min<std::size_t>(2, checkpoints.size() - 1));
    if (burn_in >= checkpoints.size()) throw ConfigError("cantorwheel: burn_in leaves no checkpoint");
    std::vector<std::pair<CantorRadius, CantorRadius>> pairs;
    if (c.params.contains("pairs")) {
        for (const auto& pj : c.params["pairs"]) {
            pairs.emplace_back(CantorRadius::parse(pj.at("r1").get<std::string>()),
                               CantorRadius::parse(pj.at("r2").get<std::string>()));
        }
    } else {
        pairs.emplace_back(CantorRadius(""), CantorRadius("", true));
    }
    std::vector<std::function<Files()>> tasks;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        tasks.emplace_back([&, i] {
            const auto& [r1, r2] = pairs[i];
            const std::string header = "r1: " + r1.str() + " = " + r1.value().str() + "\nr2: " + r2.str() + " = " +
                                       r2.value().str() + "\nspace: Y\n";
            return pair_files(i, pair_profile_Y(r1, r2, sched, c.deltas, checkpoints, burn_in), c.tolerance, header);
        });
    }
    Files out;
    for (auto& f : run_jobs(tasks, jobs)) out.merge(f);
    const std::uint64_t eta_len = std::min<std::uint64_t>(horizon, sched.limit());
    const auto eta = eta_series(eta_len, sched);
    std::vector<LevelCount> levels;
    for (std::size_t m = 0; m < sched.blocks() && sched.s(m) + sched.n(m) <= eta_len; ++m) {
        levels.push_back(count_levels(m, eta, sched));
    }
    out["levels.csv"] = levels_csv(levels);
    out["schedule.csv"] = schedule_csv(sched);
    json extra = {{"horizon", horizon}, {"checkpoints", checkpoints}, {"burn_in", burn_in}, {"blocks", sched.blocks()}};
    out["run.json"] = extra.dump(2) + '\n';
    return out;
}

inline Files run_fiberlab(const ExperimentConfig& c, unsigned jobs) {
    using namespace fiberlab;
    const auto sched = c.params.contains("schedule")
                           ? FiberSchedule(c.params["schedule"].get<std::vector<std::uint64_t>>())
                           : FiberSchedule::standard();
    const auto violations = sched.divisibility_violations();
    if (!violations.empty()) throw ConfigError("fiberlab: schedule invariant broken: " + violations.front());
    std::size_t L = 5;
    if (c.horizon) {
        L = 0;
        for (std::size_t l = 1; l <= sched.blocks(); ++l) {
            if (sched.m(l) == *c.horizon) L = l;
        }
        if (L == 0) throw ConfigError("fiberlab: horizon must be a block end m_L");
    }
    const std::size_t burn_in = c.params.value("burn_in", std::size_t{2});
    if (burn_in >= L) throw ConfigError("fiberlab: burn_in leaves no checkpoint");
    std::vector<std::pair<FiberPoint, FiberPoint>> pairs;
    if (c.params.contains("pairs")) {
        for (const auto& pj : c.params["pairs"]) {
            pairs.emplace_back(detail::fiber_point(pj.at("u")), detail::fiber_point(pj.at("v")));
        }
    } else {
        pairs.push_back({{1, 1.0}, {1, 0.5}});
    }
    const auto checkpoints = block_checkpoints(L, sched);
    std::vector<std::function<Files()>> tasks;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        tasks.emplace_back([&, i] {
            const auto& [u, v] = pairs[i];
            auto pt = [](const FiberPoint& p) { return "(" + std::to_string(p.k) + ", " + detail::fmt_double(p.z) + ")"; };
            const std::string header = "u: " + pt(u) + "\nv: " + pt(v) + '\n';
            return pair_files(i, pair_profile(u, v, sched, c.deltas, checkpoints, burn_in), c.tolerance, header);
        });
    }
    Files out;
    for (auto& f : run_jobs(tasks, jobs)) out.merge(f);
    const std::size_t scan_size = c.params.value("scan_pairs", std::size_t{30});
    if (scan_size > 0) {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::uniform_int_distribution<std::uint64_t> fiber(0, 6);
        std::vector<std::pair<FiberPoint, FiberPoint>> sample;
        for (std::size_t i = 0; i < scan_size; ++i) {
            const std::uint64_t kv = fiber(rng);
            sample.push_back({{1, unit(rng)}, {kv, unit(rng)}});
        }
        out["scan.csv"] = scan_csv(dc2_absence_scan(sample, L, c.deltas, c.tolerance, sched, burn_in));
    }
    out["schedule.csv"] = schedule_csv(sched);
    json extra = {{"horizon", sched.m(L)}, {"blocks", L}, {"checkpoints", checkpoints}, {"burn_in", burn_in},
                  {"scan_pairs", scan_size}};
    out["run.json"] = extra.dump(2) + '\n';
    return out;
}

inline Files run_bss(const ExperimentConfig& c, unsigned jobs) {
    using namespace bss;
    const auto lengths = c.params.value("blocks", std::vector<int>{5, 7, 9});
    const BssConfig config{BlockStructure(lengths)};
    Files out;
    const std::size_t table_blocks = std::min<std::size_t>(config.structure().blocks(), 3);
    for (std::size_t l = 1; l <= table_blocks; ++l) {
        for (int bit : {0, 1}) {
            out["figure1_l" + std::to_string(l) + "_bit" + std::to_string(bit) + ".csv"] =
                phi_table_csv(phi_table(l, bit, config));
        }
    }
    std::vector<std::string> omegas = c.params.value("omegas", std::vector<std::string>{});
    if (omegas.empty()) {
        std::mt19937_64 rng(c.seed);
        std::bernoulli_distribution coin(0.5);
        for (int s = 0; s < 20; ++s) {
            std::string w;
            for (std::size_t j = 0; j < config.structure().blocks(); ++j) w.push_back(coin(rng) ? '1' : '0');
            omegas.push_back(w);
        }
    }
    const std::size_t lemma_blocks = std::min<std::size_t>(config.structure().blocks(), 3);
    std::string lemma;
    for (const auto& w : omegas) {
        for (std::size_t i = 1; i <= lemma_blocks; ++i) lemma += lemma_record(lemma_freq_count(w, i, config), w) + '\n';
    }
    out["lemma.txt"] = lemma;

    std::vector<std::pair<std::string, std::string>> pairs;
    if (c.params.contains("pairs")) {
        for (const auto& pj : c.params["pairs"]) pairs.emplace_back(pj.at(0).get<std::string>(), pj.at(1).get<std::string>());
    }
    const std::size_t windows = std::min<std::size_t>(config.structure().blocks() / 2, 3);
    std::vector<std::uint64_t> checkpoints;
    for (std::size_t i = 1; i <= windows; ++i) checkpoints.push_back(static_cast<std::uint64_t>(config.window(i)));
    if (!pairs.empty() && checkpoints.empty()) throw ConfigError("bss: pairs need at least two blocks");
    std::vector<std::function<Files()>> tasks;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        tasks.emplace_back([&, i] {
            const auto& [w1, w2] = pairs[i];
            const auto series = scrambled_pair_series(w1, w2, checkpoints.back(), config, 1);
            const std::string header = "omega: " + w1 + "\nomega': " + w2 + "\nmetrics: rho == rho' at every step\n";
            return pair_files(i, build_profile(series, c.deltas, checkpoints, 0), c.tolerance, header);
        });
    }
    for (auto& f : run_jobs(tasks, jobs)) out.merge(f);
    json extra = {{"blocks", lengths}, {"omegas", omegas}, {"checkpoints", checkpoints}};
    out["run.json"] = extra.dump(2) + '\n';
    return out;
}

// Everything that affects output, including the code version.
inline std::string manifest(const ExperimentConfig& c, const Files& files) {
    json m;
    m["version"] = DCHAOS_VERSION;
    m["system"] = c.system;
    std::vector<std::string> deltas;
    for (const auto& d : c.deltas) deltas.push_back(d.str());
    m["deltas"] = deltas;
    m["tolerance"] = c.tolerance.str();
    m["seed"] = c.seed;
    m["horizon"] = c.horizon ? json(*c.horizon) : json(nullptr);
    m["params"] = c.params;
    std::vector<std::string> names;
    for (const auto& [name, _] : files) names.push_back(name);
    m["files"] = names;
    return m.dump(2) + '\n';
}

inline Files run(const ExperimentConfig& c, unsigned jobs = 1) {
    Files out;
    if (c.system == "telescope") out = run_telescope(c, jobs);
    else if (c.system == "cantorwheel") out = run_cantorwheel(c, jobs);
    else if (c.system == "fiberlab") out = run_fiberlab(c, jobs);
    else if (c.system == "bss") out = run_bss(c, jobs);
    else throw ConfigError("unknown system " + c.system);
    out["manifest.json"] = manifest(c, out);
    return out;
}

inline void write_files(const Files& files, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [name, body] : files) {
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
        os << body;
    }
}

}  // namespace dchaos::runner
