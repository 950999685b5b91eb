// Experiment runner for event-triggered decentralized SGD: runs the
// experiment matrix from declarative configs, verifies run artifacts, and
// compares runs. Exit codes: 0 success, 1 failed verification, 2 config
// error, 3 data error, 4 missing/invalid run artifacts.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "detsgrad/analysis.hpp"
#include "detsgrad/config.hpp"
#include "detsgrad/dataset.hpp"
#include "detsgrad/errors.hpp"
#include "detsgrad/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitArtifacts = 4;

struct RunOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    int seeds = 0;
    int threads = 1;
};

std::string read_config_text(const std::string& path) {
    if (path.starts_with("preset:")) return detsgrad::preset_json(path.substr(7));
    std::ifstream in(path);
    if (!in) throw detsgrad::ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_run(const RunOptions& opt) {
    std::string text = read_config_text(opt.config_path);
    text = detsgrad::apply_overrides(text, opt.overrides);
    auto config = detsgrad::parse_experiment_json(text, opt.config_path);

    if (!opt.out_dir.empty()) config.output_dir = opt.out_dir;
    if (opt.seeds > 0) {
        const std::uint64_t base = config.seeds.front();
        config.seeds.clear();
        for (int s = 0; s < opt.seeds; ++s) config.seeds.push_back(base + s);
    }
    config.sim.threads = opt.threads;

    fs::create_directories(config.output_dir);
    std::vector<std::string> summaries;
    for (const auto seed : config.seeds) {
        detsgrad::SimConfig sim = config.sim;
        sim.master_seed = seed;
        std::cout << "[run] " << config.name << " seed=" << seed << " ..." << std::flush;
        const auto result = detsgrad::run(sim);
        const fs::path seed_dir = fs::path(config.output_dir) / ("seed_" + std::to_string(seed));
        fs::create_directories(seed_dir);
        {
            std::ofstream csv(seed_dir / "metrics.csv");
            detsgrad::write_metrics_csv(result.metrics, csv);
        }
        const std::string summary = detsgrad::run_summary_json(config, seed, result);
        {
            std::ofstream sj(seed_dir / "summary.json");
            sj << summary << "\n";
        }
        summaries.push_back(summary);
        std::cout << " done (" << result.metrics.total_wall_seconds << " s, "
                  << result.iterations << " iterations)\n";
    }
    {
        std::ofstream agg(fs::path(config.output_dir) / "aggregate.json");
        agg << detsgrad::aggregate_summary_json(summaries) << "\n";
    }
    std::cout << "[run] artifacts in " << config.output_dir << "\n";
    return kExitOk;
}

int cmd_verify(const std::vector<std::string>& dirs, const std::string& out_file) {
    detsgrad::VerificationReport report;
    if (dirs.size() == 2) {
        report = detsgrad::verify_equivalence(dirs[0], dirs[1]);
        const auto extra_a = detsgrad::verify_run_dir(dirs[0]);
        report.checks.insert(report.checks.end(), extra_a.checks.begin(), extra_a.checks.end());
    } else {
        report = detsgrad::verify_run_dir(dirs[0]);
    }

    const std::string text = report.to_json();
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        out << text << "\n";
    }
    std::cout << text << "\n";
    return report.all_pass() ? kExitOk : kExitVerifyFailed;
}

struct RunSummaryView {
    std::string name;
    std::string algorithm;
    std::string topology;
    int n_agents = 0;
    std::vector<double> accuracy;  // mean across seeds, may be empty
    std::vector<double> broadcasts;  // mean across seeds
    double reduction_pct = 0.0;
    bool has_accuracy = false;
};

RunSummaryView load_run_view(const fs::path& dir) {
    std::vector<fs::path> seed_dirs;
    if (fs::exists(dir / "summary.json")) seed_dirs.push_back(dir);
    if (fs::exists(dir))
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_directory() && e.path().filename().string().starts_with("seed_"))
                seed_dirs.push_back(e.path());
    if (seed_dirs.empty())
        throw detsgrad::ArtifactError("no run summaries under " + dir.string());
    std::sort(seed_dirs.begin(), seed_dirs.end());

    RunSummaryView view;
    int count = 0;
    for (const auto& sd : seed_dirs) {
        std::ifstream in(sd / "summary.json");
        if (!in) throw detsgrad::ArtifactError("missing " + (sd / "summary.json").string());
        json s;
        try {
            s = json::parse(in);
        } catch (const json::parse_error& e) {
            throw detsgrad::ArtifactError("bad summary in " + sd.string() + ": " + e.what());
        }
        if (count == 0) {
            view.name = s.value("experiment", dir.filename().string());
            view.algorithm = s.value("algorithm", "?");
            view.topology = s.value("topology", "-");
            view.n_agents = s.value("n_agents", 0);
            view.broadcasts.assign(view.n_agents, 0.0);
            view.accuracy.assign(view.n_agents, 0.0);
        }
        if (s.value("n_agents", 0) != view.n_agents)
            throw detsgrad::ArtifactError("agent count differs between seeds in " + dir.string());
        const auto totals = s.value("broadcast_totals", std::vector<double>{});
        for (std::size_t i = 0; i < totals.size() && i < view.broadcasts.size(); ++i)
            view.broadcasts[i] += totals[i];
        view.reduction_pct += s.value("reduction_pct", 0.0);
        if (s.contains("accuracy")) {
            view.has_accuracy = true;
            const auto acc = s.at("accuracy").get<std::vector<double>>();
            for (std::size_t i = 0; i < acc.size() && i < view.accuracy.size(); ++i)
                view.accuracy[i] += acc[i];
        }
        ++count;
    }
    for (auto& b : view.broadcasts) b /= count;
    for (auto& a : view.accuracy) a /= count;
    view.reduction_pct /= count;
    return view;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& csv_file) {
    std::vector<RunSummaryView> views;
    for (const auto& d : dirs) views.push_back(load_run_view(d));

    const int n = views.front().n_agents;
    for (const auto& v : views)
        if (v.n_agents != n)
            throw detsgrad::ArtifactError("runs have different agent counts; cannot compare");

    bool topology_differs = false;
    for (const auto& v : views) topology_differs |= v.topology != views.front().topology;
    if (topology_differs)
        std::cout << "[warning] compared runs use different topologies\n";

    std::ostringstream csv;
    csv << "run,algorithm,metric";
    for (int i = 0; i < n; ++i) csv << ",agent_" << i;
    csv << ",reduction_pct\n";

    std::cout << std::left;
    for (const auto& v : views) {
        std::cout << v.name << " (" << v.algorithm << ", " << v.topology << ")\n";
        if (v.has_accuracy) {
            std::cout << "  accuracy%:";
            csv << v.name << ',' << v.algorithm << ",accuracy_pct";
            for (int i = 0; i < n; ++i) {
                std::cout << ' ' << std::fixed;
                std::cout.precision(2);
                std::cout << 100.0 * v.accuracy[i];
                csv << ',' << 100.0 * v.accuracy[i];
            }
            std::cout << "\n";
            csv << ",\n";
        }
        std::cout << "  broadcasts:";
        csv << v.name << ',' << v.algorithm << ",broadcasts";
        for (int i = 0; i < n; ++i) {
            std::cout << ' ' << static_cast<long>(v.broadcasts[i]);
            csv << ',' << static_cast<long>(v.broadcasts[i]);
        }
        std::cout << "\n  reduction: " << v.reduction_pct << "%\n";
        csv << ',' << v.reduction_pct << "\n";
    }

    if (!csv_file.empty()) {
        std::ofstream out(csv_file);
        out << csv.str();
        std::cout << "[compare] table written to " << csv_file << "\n";
    }
    return kExitOk;
}

int cmd_presets(const std::string& name) {
    if (name.empty()) {
        for (const auto& n : detsgrad::preset_names()) std::cout << n << "\n";
        return kExitOk;
    }
    std::cout << detsgrad::preset_json(name) << "\n";
    return kExitOk;
}

int cmd_idx_inspect(const std::string& file) {
    const auto header = detsgrad::read_idx_header(file);
    std::printf("file:  %s\n", file.c_str());
    std::printf("magic: 0x%08x (type byte 0x%02x, %zu dimension(s))\n", header.magic,
                (header.magic >> 8) & 0xff, header.dims.size());
    for (std::size_t i = 0; i < header.dims.size(); ++i)
        std::printf("dim%zu:  %u\n", i, header.dims[i]);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-triggered decentralized SGD simulator"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Execute an experiment config over its seeds");
    run->add_option("--config", run_opt.config_path,
                    "Config file path, or preset:<name> for a built-in")->required();
    run->add_option("--override", run_opt.overrides,
                    "Config override KEY=VAL (dotted path, repeatable)");
    run->add_option("--out", run_opt.out_dir, "Output directory (overrides config)");
    run->add_option("--seeds", run_opt.seeds, "Run N consecutive seeds from the first config seed");
    run->add_option("--threads", run_opt.threads, "Worker threads (does not affect results)");

    std::vector<std::string> verify_dirs;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "Check run artifacts against the theory properties");
    verify->add_option("dirs", verify_dirs, "Run directory (or a pair for the equivalence check)")
        ->required()
        ->expected(1, 2);
    verify->add_option("--out", verify_out, "Write the JSON report here");

    std::vector<std::string> compare_dirs;
    std::string compare_csv;
    auto* compare = app.add_subcommand("compare", "Tabulate accuracies and broadcast counts of runs");
    compare->add_option("dirs", compare_dirs, "Two or more run directories")->required();
    compare->add_option("--csv", compare_csv, "Also write the table as CSV");

    std::string preset_name;
    auto* presets = app.add_subcommand("presets", "List built-in presets or print one as JSON");
    presets->add_option("name", preset_name, "Preset name to print");

    std::string idx_file;
    auto* idx = app.add_subcommand("idx-inspect", "Dump the header fields of an IDX file");
    idx->add_option("file", idx_file, "IDX file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (verify->parsed()) return cmd_verify(verify_dirs, verify_out);
        if (compare->parsed()) {
            if (compare_dirs.size() < 2) {
                std::cerr << "error: compare needs at least two run directories\n";
                return kExitArtifacts;
            }
            return cmd_compare(compare_dirs, compare_csv);
        }
        if (presets->parsed()) return cmd_presets(preset_name);
        if (idx->parsed()) return cmd_idx_inspect(idx_file);
    } catch (const detsgrad::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const detsgrad::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const detsgrad::ArtifactError& e) {
        std::cerr << "artifact error: " << e.what() << "\n";
        return kExitArtifacts;
    } catch (const detsgrad::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const detsgrad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
