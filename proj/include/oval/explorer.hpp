#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oval/geometry.hpp"
#include "oval/grid2d.hpp"
#include "oval/grid_map.hpp"
#include "oval/rng.hpp"

namespace oval {

enum class KernelMode { Unnormalized, NormalizedDensity };
enum class SelectionMode { Argmax, Softmax, NearestFrontier };

struct ExplorationParams {
    double a_d = 1.0;
    // Semantic evidence, when present, outranks plain proximity; distance
    // orders the semantically silent candidates. The footprint mass grows
    // with the step count, hence its small weight.
    double a_s = 2.0;
    double a_f = 0.002;
    double sigma_d = 12.0; // m^2
    double sigma_s = 1.5;
    double sigma_f = 4.0;
    double d_th = 50.0; // m; farther frontiers are discarded outright
    KernelMode kernel = KernelMode::Unnormalized;
    SelectionMode selection = SelectionMode::Argmax;
    double softmax_temp = 0.1;
};

// Radial kernel: exp(-d^2 / (2 sigma)), with the 2D density normalizer
// 1/(2 pi sigma) applied in NormalizedDensity mode.
inline double radial_kernel(double dist, double sigma, KernelMode mode) {
    double g = std::exp(-dist * dist / (2.0 * sigma));
    if (mode == KernelMode::NormalizedDensity) g /= 2.0 * kPi * sigma;
    return g;
}

// Co-occurrence groups and goal->group affinities. Group membership of a
// memory label is tested word-bounded, so "green desk" counts as a "desk"
// member. Unknown goals or labels score 0.
struct CooccurrenceTable {
    std::map<std::string, std::vector<std::string>> groups;
    std::map<std::string, std::map<std::string, double>> affinity; // goal -> group -> p

    double affinity_for(const std::string& goal, const std::string& group) const;
    // max over groups containing the label of affinity(goal, group)
    double semantic_prob(const std::string& goal, const std::string& label) const;
};

struct LabeledPoint {
    std::string label;
    Vec3 position;
};

// Accumulated Gaussian mass over past agent positions. Splats are exact
// per cell center within the truncation radius (3 sigma in std units,
// values below 1e-6 dropped), computed separably per row/column factor.
class FootprintLog {
public:
    FootprintLog() = default;
    FootprintLog(Vec2 center, double resolution, int cells_per_side, double sigma_f,
                 KernelMode mode);

    void record(Vec2 position);
    double mass_at(Vec2 position) const;
    int pose_count() const { return pose_count_; }
    double sigma() const { return sigma_f_; }

private:
    Grid2D<double> splat_;
    double sigma_f_ = 4.0;
    KernelMode mode_ = KernelMode::Unnormalized;
    double radius_m_ = 6.0;
    int pose_count_ = 0;
};

// Frontier waypoints already attempted, keyed by world cell so grid
// growth cannot shift them. Insert-only within an episode group.
class TriedFrontierSet {
public:
    bool contains(const Vec2& world, double resolution) const;
    void insert(const Vec2& world, double resolution);
    std::size_t size() const { return keys_.size(); }

private:
    std::set<std::pair<std::int64_t, std::int64_t>> keys_;
};

double score_distance(const FrontierWaypoint& f, const Pose& pose,
                      const ExplorationParams& params);
double score_semantics(const FrontierWaypoint& f, const std::vector<LabeledPoint>& memory,
                       const std::string& goal, const CooccurrenceTable& table,
                       const ExplorationParams& params);
double score_footprint(const FrontierWaypoint& f, const FootprintLog& log,
                       const ExplorationParams& params);

struct FrontierScore {
    FrontierWaypoint waypoint;
    double o_d = 0.0;
    double o_s = 0.0;
    double o_f = 0.0;
    double dist = 0.0; // to agent, for tie-breaking

    double total() const { return o_d + o_s + o_f; }
};

std::vector<FrontierScore> score_frontiers(const std::vector<FrontierWaypoint>& waypoints,
                                           const Pose& pose,
                                           const std::vector<LabeledPoint>& memory,
                                           const std::string& goal,
                                           const CooccurrenceTable& table,
                                           const FootprintLog& log,
                                           const ExplorationParams& params);

// Selection over scored candidates. Argmax breaks ties by nearer
// distance, then lower row-major cell. Softmax samples proportionally to
// exp(total / T). NearestFrontier ignores scores entirely.
std::optional<std::size_t> pick_frontier(const std::vector<FrontierScore>& scored,
                                         const ExplorationParams& params, DetRng& rng);

// Scores untried waypoints, picks one, and inserts it into tried.
// Returns nullopt when every waypoint was already tried. When dump is
// non-null the scored candidates of this decision are appended to it.
std::optional<FrontierWaypoint> choose_frontier(
    const std::vector<FrontierWaypoint>& waypoints, TriedFrontierSet& tried, const Pose& pose,
    const std::vector<LabeledPoint>& memory, const std::string& goal,
    const CooccurrenceTable& table, const FootprintLog& log, const ExplorationParams& params,
    double grid_resolution, DetRng& rng, std::vector<FrontierScore>* dump = nullptr);

} // namespace oval
