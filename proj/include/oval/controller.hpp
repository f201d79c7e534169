#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oval/astar.hpp"
#include "oval/explorer.hpp"
#include "oval/grid_map.hpp"
#include "oval/memory_model.hpp"
#include "oval/sim_world.hpp"

namespace oval {

enum class Phase {
    QueryMemory,
    NavigateToGoal,
    Verifying,
    NavigateToFrontier,
    LookingAround,
    RandomWalking,
};

const char* phase_name(Phase p);
const char* action_name(Action a);

struct VerifyParams {
    double omega = 0.5;      // weight on the verifier probability
    // Stop when omega*phi + (1-omega)*C reaches this. High enough that a
    // confident memory entry cannot out-vote a negative verifier.
    double threshold = 0.55;
    int panorama_views = 12;
};

// omega * phi + (1 - omega) * confidence
inline double verify_score(double phi, double confidence, double omega) {
    return omega * phi + (1.0 - omega) * confidence;
}

struct ControllerParams {
    double heading_tolerance = kPi / 12.0; // 15 degrees
    double waypoint_arrival = 0.15;        // m
    double lookahead = 0.35;               // m, waypoint consumption radius
    int lookaround_turns = 12;
    int max_steps = 500;
    int blocked_replan_after = 2;  // consecutive blocked forward steps
    int blocked_abandon_after = 6;
    int max_leg_steps = 150;       // abandon a navigation leg after this many steps
    double random_walk_radius = 2.0;
    // Fallback approach radius for goal entries whose close surroundings
    // are mapped as obstacle (bulky furniture); stays inside the success
    // radius so verification geometry is preserved.
    double relaxed_goal_approach = 0.9;
    int unreachable_promote_after = 5; // repeated planner failures become tried
    bool log_trajectory = false;
    bool verify_stop = true;      // off: stop immediately on arrival
    bool lifelong_memory = true;  // off: memory cleared at every episode start
    bool use_probability_map = true; // off: nearest-frontier selection
};

struct DbscanParams {
    double eps_cells = 3.0;
    int min_pts = 2;
};

struct MappingParams {
    double resolution = 0.1;
    HeightBand height_band{0.2, 1.5};
    int initial_cells = 128;
};

enum class StopKind { None, Verified, Unverified, Budget };

struct FrontierDecision {
    CellIndex cell;
    Vec2 world;
    double o_d = 0.0, o_s = 0.0, o_f = 0.0;
    double total() const { return o_d + o_s + o_f; }
};

struct StepRecord {
    int step = 0;
    Pose pose;
    Action action = Action::Stop;
    Phase phase = Phase::QueryMemory;
    std::size_t memory_size = 0;
    std::optional<FrontierDecision> chosen_frontier;
};

// Highest-confidence entry; ties by shorter planned path, then insertion
// order. Unreachable entries lose ties; throws InvalidCall on empty input.
std::uint64_t select_best_candidate(const std::vector<std::uint64_t>& candidates,
                                    const MemoryModel& memory, const OccupancyGrid& grid,
                                    const Pose& pose, const PlannerParams& planner);

// 12 x 30-degree left turns: a full in-place revolution.
std::vector<Action> look_around_script(int turns = 12);

// Uniform draw over plannable Free cells within the radius, widening by
// x2 until one is found; nullopt when the agent is fully enclosed.
std::optional<Vec2> random_walk_target(const OccupancyGrid& grid, const Pose& pose, DetRng& rng,
                                       const PlannerParams& planner, double radius);

// Rotate-then-move follower: turn while the heading error to the next
// waypoint exceeds the tolerance, else move forward. Waypoints pop when
// reached; nullopt means the queue is exhausted.
std::optional<Action> follow_step(const Pose& pose, std::deque<Vec2>& waypoints,
                                  const ControllerParams& params);

// Builds a memory entry from a detection: label preprocessing, Eq-style
// confidence, scene descriptor from the observation sample. nullopt when
// the label is rejected.
std::optional<MemoryEntry> detection_to_entry(const Detection& det,
                                              const HsvHistogram& scene_sample,
                                              const std::set<std::string>& stoplist,
                                              const MemoryParams& params, Vec2 image_center);

struct ControllerConfig {
    MappingParams mapping;
    DbscanParams dbscan;
    ExplorationParams explore;
    MemoryParams memory;
    VerifyParams verify;
    PlannerParams planner;
    ControllerParams control;
    std::set<std::string> stoplist;
    CooccurrenceTable cooccurrence;
    Vec2 image_center{320.0, 240.0};
};

// One navigation session per episode group: the grid, memory, footprint
// and tried-frontier set persist across episodes; per-episode state
// resets in begin_episode. Emits exactly one action per step.
class Controller {
public:
    Controller(const ControllerConfig& config, const FeatureMatcher& matcher,
               const Verifier& verifier, const SynonymProvider& synonyms, Pose start,
               std::uint64_t seed);

    void begin_episode(const std::string& goal);
    Action step(const Observation& obs);

    const OccupancyGrid& grid() const { return grid_; }
    const MemoryModel& memory() const { return memory_; }
    const FootprintLog& footprint() const { return footprint_; }
    Phase phase() const { return phase_; }
    int step_count() const { return step_count_; }
    StopKind stop_kind() const { return stop_kind_; }
    int frontier_selections() const { return frontier_selections_; }
    int verify_attempts() const { return verify_attempts_; }
    const std::vector<StepRecord>& trajectory() const { return trajectory_; }
    const std::vector<std::pair<int, std::vector<FrontierScore>>>& decision_dumps() const {
        return decision_dumps_;
    }

private:
    ControllerConfig cfg_;
    const FeatureMatcher* matcher_;
    const Verifier* verifier_;
    const SynonymProvider* synonyms_;
    DetRng rng_;

    OccupancyGrid grid_;
    FootprintLog footprint_;
    TriedFrontierSet tried_frontiers_;
    MemoryModel memory_;

    std::string goal_;
    SynonymSet syn_;
    std::set<std::uint64_t> tried_goals_; // verification failures, episode-scoped
    // planner-unreachable marks are positional and transient: cleared once
    // the agent completes a movement leg, promoted to tried after repeats
    std::set<std::uint64_t> unreachable_goals_;
    std::map<std::uint64_t, int> unreachable_counts_;
    Phase phase_ = Phase::LookingAround;
    int lookaround_left_ = 0;
    std::deque<Vec2> path_;
    Vec2 nav_target_{};
    std::uint64_t target_entry_ = 0;
    std::vector<Pose> panorama_;
    int panorama_left_ = 0;
    int step_count_ = 0;
    bool stopped_ = false;
    StopKind stop_kind_ = StopKind::None;
    int blocked_streak_ = 0;
    int leg_steps_ = 0;
    std::optional<Vec2> last_position_;
    bool awaiting_move_ = false;
    int frontier_selections_ = 0;
    int verify_attempts_ = 0;

    std::vector<StepRecord> trajectory_;
    std::vector<std::pair<int, std::vector<FrontierScore>>> decision_dumps_;
    std::optional<FrontierDecision> last_decision_;

    void ingest(const Observation& obs);
    void mark_unreachable(std::uint64_t entry_id);
    bool resolve_query_phase(const Pose& pose); // picks a target or leaves RandomWalking idle
    Action emit(Action a, const Observation& obs);
    std::vector<LabeledPoint> memory_points() const;
};

} // namespace oval
