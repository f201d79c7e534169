#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oval/config.hpp"
#include "oval/lifelong.hpp"
#include "oval/serialize.hpp"

namespace fs = std::filesystem;
using namespace oval;

namespace {

// Config resolution order: builtin profile, then OVAL_CONFIG_DIR/config.json
// if present, then an explicit --config file.
Config load_config(const std::string& profile, const std::string& config_path) {
    Config cfg = config_for_profile(profile);
    if (const char* dir = std::getenv("OVAL_CONFIG_DIR")) {
        fs::path p = fs::path(dir) / "config.json";
        if (fs::exists(p)) config_update_from_json(cfg, read_file(p.string()));
    }
    if (!config_path.empty()) config_update_from_json(cfg, read_file(config_path));
    return cfg;
}

Dataset load_or_generate_dataset(const std::string& dataset_path, std::uint64_t seed,
                                 int scenes, int episodes, const Config& cfg) {
    if (!dataset_path.empty()) return dataset_from_json(read_file(dataset_path));
    DatasetSpec spec;
    spec.num_scenes = scenes;
    spec.episodes_per_scene = episodes;
    return generate_lifelong_dataset(seed, spec, cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"oval: lifelong open-vocabulary object-goal navigation testbed"};
    app.require_subcommand(1);

    std::string profile = "desk";
    std::string config_path;
    app.add_option("--profile", profile, "config profile: desk or paper-defaults")
        ->capture_default_str();
    app.add_option("--config", config_path, "JSON config overrides");

    // generate
    auto* gen = app.add_subcommand("generate", "generate scenes and a lifelong episode file");
    std::uint64_t gen_seed = 1;
    int gen_scenes = 10, gen_episodes = 5;
    std::string gen_out = "dataset.json";
    gen->add_option("--seed", gen_seed)->capture_default_str();
    gen->add_option("--scenes", gen_scenes)->capture_default_str();
    gen->add_option("--episodes", gen_episodes, "episodes per scene")->capture_default_str();
    gen->add_option("--out", gen_out)->capture_default_str();

    // eval
    auto* eval = app.add_subcommand("eval", "run the full lifelong evaluation");
    std::uint64_t eval_seed = 1;
    std::string eval_dataset, eval_out = "report.json", eval_csv, eval_traj, eval_grid_dir,
                              eval_memory_dir;
    int eval_scenes = 10, eval_episodes = 5, eval_limit = 0;
    eval->add_option("--seed", eval_seed)->capture_default_str();
    eval->add_option("--dataset", eval_dataset, "episode file (generated on the fly if absent)");
    eval->add_option("--scenes", eval_scenes)->capture_default_str();
    eval->add_option("--episodes", eval_episodes)->capture_default_str();
    eval->add_option("--limit", eval_limit, "run only the first N episodes");
    eval->add_option("--out", eval_out)->capture_default_str();
    eval->add_option("--csv", eval_csv, "also write a per-episode CSV");
    eval->add_option("--traj", eval_traj, "write a JSONL trajectory/probability-map log");

    // ablate
    auto* ablate = app.add_subcommand("ablate", "toggle matrix over the same episodes/seeds");
    std::uint64_t ab_seed = 1;
    int ab_seeds = 3, ab_scenes = 10, ab_episodes = 5;
    std::string ab_dataset, ab_out = "ablation.json";
    bool ab_factors = false;
    ablate->add_option("--seed", ab_seed, "first seed")->capture_default_str();
    ablate->add_option("--seeds", ab_seeds, "number of seeds")->capture_default_str();
    ablate->add_option("--dataset", ab_dataset);
    ablate->add_option("--scenes", ab_scenes)->capture_default_str();
    ablate->add_option("--episodes", ab_episodes)->capture_default_str();
    ablate->add_option("--out", ab_out)->capture_default_str();
    ablate->add_flag("--factors", ab_factors,
                     "ablate the probability-map factors instead of the system modules");

    // report
    auto* rep = app.add_subcommand("report", "derive CSV tables and curves from a report");
    std::string rep_in, rep_csv, rep_curves;
    bool rep_print = false;
    rep->add_option("--in", rep_in)->required();
    rep->add_option("--csv", rep_csv);
    rep->add_option("--curves", rep_curves, "SR/SPL vs. number of lifelong targets");
    rep->add_flag("--print", rep_print);

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = load_config(profile, config_path);

        if (gen->parsed()) {
            DatasetSpec spec;
            spec.num_scenes = gen_scenes;
            spec.episodes_per_scene = gen_episodes;
            Dataset ds = generate_lifelong_dataset(gen_seed, spec, cfg);
            write_file(gen_out, dataset_to_json(ds));
            std::cout << "wrote " << gen_out << " (" << ds.scenes.size() << " scenes, "
                      << ds.episodes.size() << " episodes)\n";
        } else if (eval->parsed()) {
            Dataset ds =
                load_or_generate_dataset(eval_dataset, eval_seed, eval_scenes, eval_episodes, cfg);
            if (eval_limit > 0 && static_cast<int>(ds.episodes.size()) > eval_limit)
                ds.episodes.resize(static_cast<std::size_t>(eval_limit));
            TrajectorySink sink;
            EvalReport report =
                run_lifelong(ds, cfg, eval_seed, eval_traj.empty() ? nullptr : &sink);
            write_file(eval_out, report_to_json(report));
            if (!eval_csv.empty()) write_file(eval_csv, report_to_csv(report));
            if (!eval_traj.empty()) {
                std::string jsonl;
                for (const auto& line : sink.lines) jsonl += line + "\n";
                write_file(eval_traj, jsonl);
            }
            std::printf("episodes %zu  SR %.1f%%  SPL %.1f%%  (seed %llu)\n",
                        report.records.size(), report.sr, report.spl,
                        static_cast<unsigned long long>(report.seed));
        } else if (ablate->parsed()) {
            Dataset ds =
                load_or_generate_dataset(ab_dataset, ab_seed, ab_scenes, ab_episodes, cfg);
            std::vector<std::uint64_t> seeds;
            for (int i = 0; i < ab_seeds; ++i) seeds.push_back(ab_seed + static_cast<std::uint64_t>(i));
            std::vector<std::pair<std::string, Toggles>> arms;
            Toggles full;
            arms.emplace_back("full", full);
            if (ab_factors) {
                Toggles t = full;
                t.footprint = false;
                arms.emplace_back("footprint-off", t);
                t = full;
                t.distance = false;
                arms.emplace_back("distance-off", t);
                t = full;
                t.semantics = false;
                arms.emplace_back("semantics-off", t);
            } else {
                Toggles t = full;
                t.verify_stop = false;
                arms.emplace_back("verify-off", t);
                t = full;
                t.memory_model = false;
                arms.emplace_back("memory-off", t);
                t = full;
                t.probability_map = false;
                arms.emplace_back("probability-map-off", t);
            }
            auto results = run_ablation(ds, cfg, seeds, arms);
            std::cout << ablation_table(results);
            write_file(ab_out, ablation_to_json(results));
        } else if (rep->parsed()) {
            EvalReport report = report_from_json(read_file(rep_in));
            if (!rep_csv.empty()) write_file(rep_csv, report_to_csv(report));
            if (!rep_curves.empty()) write_file(rep_curves, curves_csv(report));
            if (rep_print || (rep_csv.empty() && rep_curves.empty())) {
                std::printf("episodes %zu  SR %.1f%%  SPL %.1f%%\n", report.records.size(),
                            report.sr, report.spl);
                std::cout << curves_csv(report);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
