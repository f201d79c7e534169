#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "oval/config.hpp"
#include "oval/sim_world.hpp"

namespace oval {

struct Episode {
    std::string scene_id;
    Pose start;
    std::string goal_label;
    double floor_height = 0.0;
};

struct EpisodeGroup {
    std::string scene_id;
    double anchor_height = 0.0;
    std::vector<Episode> episodes;
};

// Partition by scene in first-appearance order; within a scene an episode
// joins the first group whose anchor (its first episode's floor height)
// differs by less than 0.5 m, else opens a new group. Relative order is
// preserved.
std::vector<EpisodeGroup> sort_episodes(const std::vector<Episode>& episodes);

struct EpisodeRecord {
    std::string scene_id;
    int group_index = 0;
    int index_in_group = 0;
    std::string goal;
    bool success = false;
    int steps = 0;
    std::string stop_reason; // verified_stop / unverified_stop / budget / wrong_stop
    double path_length = 0.0;     // p_i, m
    double shortest_length = 0.0; // l_i, m (from the effective start pose)
    std::size_t memory_start = 0, memory_end = 0;
    std::size_t unknown_start = 0, unknown_end = 0;
    std::size_t explored_start = 0, explored_end = 0;
    int frontier_selections = 0;
    int verify_attempts = 0;
};

struct EvalReport {
    std::vector<EpisodeRecord> records;
    double sr = 0.0;  // percent
    double spl = 0.0; // percent
    std::uint64_t config_fingerprint = 0;
    std::uint64_t seed = 0;
    std::string profile;
};

// SR = 100 * successes / N; SPL = 100 * mean of S_i * l_i / max(p_i, l_i).
// Throws EmptyReport on an empty record set.
std::pair<double, double> compute_spl(const std::vector<EpisodeRecord>& records);

struct Dataset {
    std::uint64_t seed = 0;
    std::vector<Scene> scenes;
    std::vector<Episode> episodes;

    const Scene& scene(const std::string& id) const;
};

struct DatasetSpec {
    int num_scenes = 10;
    int episodes_per_scene = 5;
    // Goals are drawn uniformly (with repetition, as in standard ObjectNav
    // episode streams) from the catalog labels present in each scene. An
    // empty catalog admits every label the scene contains.
    std::vector<std::string> goal_catalog{"bed", "sofa", "chair", "toilet", "tv", "plant"};
};

// Seeded scenes plus solvable episodes (geodesic exists, start at least
// 1 m from every instance of the episode goal), already sorted.
Dataset generate_lifelong_dataset(std::uint64_t seed, const DatasetSpec& spec,
                                  const Config& cfg);

struct TrajectorySink {
    std::vector<std::string> lines; // JSONL
};

// Runs the group sequence with lifelong persistence: within a group the
// map, memory, footprint and tried frontiers persist and the agent
// teleports to the previous end pose; a group switch resets everything.
EvalReport run_lifelong(const Dataset& dataset, const Config& cfg, std::uint64_t run_seed,
                        TrajectorySink* trajectory = nullptr);

struct AblationArm {
    std::string name;
    Toggles toggles;
    EvalReport report; // aggregated over all seeds
    std::vector<EvalReport> per_seed;
};

// Identical episodes and seeds under each toggle combination.
std::vector<AblationArm> run_ablation(const Dataset& dataset, const Config& base,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::vector<std::pair<std::string, Toggles>>& arms);

std::string ablation_table(const std::vector<AblationArm>& arms);

} // namespace oval
