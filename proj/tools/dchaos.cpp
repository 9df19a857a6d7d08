// dchaos: run experiments, the acceptance suite, schedule dumps and phi_l
// tables from the command line.
//
// Exit codes: 0 success, 1 acceptance failures, 2 configuration or runtime error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dchaos/acceptance.hpp"
#include "dchaos/bss.hpp"
#include "dchaos/cantorwheel.hpp"
#include "dchaos/fiberlab.hpp"
#include "dchaos/runner.hpp"
#include "dchaos/telescope.hpp"

namespace {

using namespace dchaos;

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

void emit(const runner::Files& files, const std::string& out_dir) {
    if (out_dir.empty()) {
        for (const auto& [name, body] : files) std::cout << "# " << name << '\n' << body;
    } else {
        runner::write_files(files, out_dir);
        std::cout << "wrote " << files.size() << " files to " << out_dir << '\n';
    }
}

std::string telescope_schedule() {
    std::ostringstream os;
    os << "k,l_k,inner_rotation,outer_rotation\n";
    for (unsigned k = 1; k <= 15; ++k) {
        const std::uint64_t n = telescope::block_bounds(k);
        os << k << ',' << n << ',' << telescope::rotation(telescope::Column::inner, n) << ','
           << telescope::rotation(telescope::Column::outer, n) << '\n';
    }
    return os.str();
}

std::string bss_schedule(const std::vector<int>& lengths) {
    const bss::BssConfig config{BlockStructure(lengths)};
    std::ostringstream os;
    os << "i,n_i,m_i,alpha_partial,window,lemma_bound\n";
    for (std::size_t i = 1; i <= config.structure().blocks(); ++i) {
        os << i << ',' << config.structure().length(i) << ',' << config.structure().prefix(i) << ','
           << config.alpha_partial(i) << ',';
        if (config.structure().prefix(i) >= 2 && config.structure().prefix(i) <= 62) {
            os << config.window(i) << ',' << config.lemma_bound(i);
        } else {
            os << "-,-";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributional chaos experiments"};
    app.require_subcommand(1);

    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> horizon;
    std::string tolerance;
    unsigned jobs = 1;

    auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    std::string config_path;
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory (stdout when omitted)");
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--horizon", horizon, "Override the config horizon");
    run->add_option("--tolerance", tolerance, "Override the config tolerance (num/den)");
    run->add_option("--jobs", jobs, "Parallel pair jobs")->check(CLI::Range(1u, 256u));

    auto* verify = app.add_subcommand("verify", "Run the acceptance criteria");
    std::optional<std::uint64_t> verify_seed;
    std::optional<std::uint64_t> verify_horizon;
    std::string fiber_schedule;
    std::vector<int> only;
    verify->add_option("--seed", verify_seed, "Sampling seed");
    verify->add_option("--horizon", verify_horizon, "Telescope horizon l_K for criteria 5 and 6");
    verify->add_option("--fiber-schedule", fiber_schedule, "Comma-separated m_l values for criterion 9");
    verify->add_option("--only", only, "Run only these criteria")->delimiter(',');
    verify->add_option("--out", out_dir, "Also write the verdicts to this directory");

    auto* dump = app.add_subcommand("dump-schedule", "Print the block schedule of a system");
    std::string system;
    std::string dump_blocks = "5,7,9,11,13,15";
    dump->add_option("system", system, "bss, telescope, cantorwheel or fiberlab")
        ->required()
        ->check(CLI::IsMember({"bss", "telescope", "cantorwheel", "fiberlab"}));
    dump->add_option("--blocks", dump_blocks, "Block lengths for bss");
    dump->add_option("--out", out_dir, "Output directory");

    auto* figure = app.add_subcommand("figure1", "phi_l tables for l = 1..3, both owner bits");
    std::string blocks = "5,7,9";
    figure->add_option("--blocks", blocks, "Block lengths n1,n2,n3");
    figure->add_option("--out", out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            runner::ExperimentConfig cfg = runner::load_config(config_path);
            if (seed) cfg.seed = *seed;
            if (horizon) cfg.horizon = *horizon;
            if (!tolerance.empty()) {
                cfg.tolerance = Rational::parse(tolerance);
                if (cfg.tolerance < Rational(0) || cfg.tolerance >= Rational(1, 4)) {
                    throw runner::ConfigError("tolerance outside [0, 1/4)");
                }
            }
            emit(runner::run(cfg, jobs), out_dir);
            return 0;
        }
        if (*verify) {
            acceptance::Options opt;
            if (verify_seed) opt.seed = *verify_seed;
            if (verify_horizon) opt.telescope_block = telescope::horizon_block(*verify_horizon);
            if (!fiber_schedule.empty()) {
                std::vector<std::uint64_t> m;
                for (int v : parse_int_list(fiber_schedule)) m.push_back(static_cast<std::uint64_t>(v));
                opt.fiber_schedule = fiberlab::FiberSchedule(m);
                opt.fiber_block = std::min(opt.fiber_block, m.size());
            }
            const auto criteria = acceptance::all_criteria();
            std::string report;
            int failed = 0;
            for (std::size_t i = 0; i < criteria.size(); ++i) {
                if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
                const auto r = acceptance::timed(criteria[i], opt);
                const std::string text = acceptance::format_result(r);
                std::cout << text << std::flush;
                report += text;
                failed += r.pass ? 0 : 1;
            }
            if (!out_dir.empty()) runner::write_files({{"verify.txt", report}}, out_dir);
            return failed == 0 ? 0 : 1;
        }
        if (*dump) {
            runner::Files files;
            if (system == "telescope") files["telescope_schedule.csv"] = telescope_schedule();
            if (system == "cantorwheel") files["cantorwheel_schedule.csv"] = cantorwheel::schedule_csv(cantorwheel::WheelSchedule::standard());
            if (system == "fiberlab") files["fiberlab_schedule.csv"] = fiberlab::schedule_csv(fiberlab::FiberSchedule::standard());
            if (system == "bss") files["bss_schedule.csv"] = bss_schedule(parse_int_list(dump_blocks));
            if (out_dir.empty()) {
                std::cout << files.begin()->second;
            } else {
                runner::write_files(files, out_dir);
            }
            return 0;
        }
        if (*figure) {
            const bss::BssConfig config{BlockStructure(parse_int_list(blocks))};
            runner::Files files;
            for (std::size_t l = 1; l <= std::min<std::size_t>(3, config.structure().blocks()); ++l) {
                for (int bit : {0, 1}) {
                    files["figure1_l" + std::to_string(l) + "_bit" + std::to_string(bit) + ".csv"] =
                        bss::phi_table_csv(bss::phi_table(l, bit, config));
                }
            }
            emit(files, out_dir);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
