#include "oval/explorer.hpp"

#include <algorithm>
#include <cmath>

#include "oval/kmp.hpp"

namespace oval {

double CooccurrenceTable::affinity_for(const std::string& goal, const std::string& group) const {
    auto git = affinity.find(goal);
    if (git == affinity.end()) return 0.0;
    auto ait = git->second.find(group);
    return ait == git->second.end() ? 0.0 : ait->second;
}

double CooccurrenceTable::semantic_prob(const std::string& goal, const std::string& label) const {
    double best = 0.0;
    for (const auto& [group, members] : groups) {
        bool member = false;
        for (const auto& m : members) {
            if (kmp_contains_word(label, m)) {
                member = true;
                break;
            }
        }
        if (member) best = std::max(best, affinity_for(goal, group));
    }
    return best;
}

FootprintLog::FootprintLog(Vec2 center, double resolution, int cells_per_side, double sigma_f,
                           KernelMode mode)
    : splat_(Vec2{center.x - 0.5 * cells_per_side * resolution,
                  center.y - 0.5 * cells_per_side * resolution},
             resolution, cells_per_side, cells_per_side, 0.0),
      sigma_f_(sigma_f),
      mode_(mode) {
    radius_m_ = std::min(3.0 * std::sqrt(sigma_f_), 32.0);
}

void FootprintLog::record(Vec2 p) {
    ++pose_count_;
    splat_.ensure_world_coverage({p.x - radius_m_, p.y - radius_m_},
                                 {p.x + radius_m_, p.y + radius_m_});
    double res = splat_.resolution();
    Vec2 org = splat_.origin();
    int c0 = std::max(0, static_cast<int>(std::floor((p.x - radius_m_ - org.x) / res)));
    int c1 = std::min(splat_.width() - 1,
                      static_cast<int>(std::floor((p.x + radius_m_ - org.x) / res)));
    int r0 = std::max(0, static_cast<int>(std::floor((p.y - radius_m_ - org.y) / res)));
    int r1 = std::min(splat_.height() - 1,
                      static_cast<int>(std::floor((p.y + radius_m_ - org.y) / res)));

    // exp(-(dx^2+dy^2)/2s) factors into row and column terms.
    std::vector<double> col_f(static_cast<std::size_t>(c1 - c0 + 1));
    for (int c = c0; c <= c1; ++c) {
        double dx = org.x + (c + 0.5) * res - p.x;
        col_f[static_cast<std::size_t>(c - c0)] = std::exp(-dx * dx / (2.0 * sigma_f_));
    }
    double norm = mode_ == KernelMode::NormalizedDensity ? 1.0 / (2.0 * kPi * sigma_f_) : 1.0;
    double rad_sq = radius_m_ * radius_m_;
    for (int r = r0; r <= r1; ++r) {
        double dy = org.y + (r + 0.5) * res - p.y;
        double row_f = std::exp(-dy * dy / (2.0 * sigma_f_)) * norm;
        for (int c = c0; c <= c1; ++c) {
            double dx = org.x + (c + 0.5) * res - p.x;
            if (dx * dx + dy * dy > rad_sq) continue;
            double v = row_f * col_f[static_cast<std::size_t>(c - c0)];
            if (v < 1e-6) continue;
            splat_.at(r, c) += v;
        }
    }
}

double FootprintLog::mass_at(Vec2 p) const {
    auto c = splat_.try_world_to_cell(p);
    return c ? splat_.at(*c) : 0.0;
}

bool TriedFrontierSet::contains(const Vec2& world, double resolution) const {
    return keys_.count(Grid2D<double>::world_cell_key(world, resolution)) > 0;
}

void TriedFrontierSet::insert(const Vec2& world, double resolution) {
    keys_.insert(Grid2D<double>::world_cell_key(world, resolution));
}

double score_distance(const FrontierWaypoint& f, const Pose& pose,
                      const ExplorationParams& params) {
    double d = distance(f.world, pose.position());
    if (d > params.d_th) return 0.0;
    return params.a_d * radial_kernel(d, params.sigma_d, params.kernel);
}

double score_semantics(const FrontierWaypoint& f, const std::vector<LabeledPoint>& memory,
                       const std::string& goal, const CooccurrenceTable& table,
                       const ExplorationParams& params) {
    double sum = 0.0;
    for (const auto& m : memory) {
        double p = table.semantic_prob(goal, m.label);
        if (p <= 0.0) continue;
        double d = distance(f.world, m.position.xy());
        sum += radial_kernel(d, params.sigma_s, params.kernel) * p;
    }
    return params.a_s * sum;
}

double score_footprint(const FrontierWaypoint& f, const FootprintLog& log,
                       const ExplorationParams& params) {
    return -params.a_f * log.mass_at(f.world);
}

std::vector<FrontierScore> score_frontiers(const std::vector<FrontierWaypoint>& waypoints,
                                           const Pose& pose,
                                           const std::vector<LabeledPoint>& memory,
                                           const std::string& goal,
                                           const CooccurrenceTable& table,
                                           const FootprintLog& log,
                                           const ExplorationParams& params) {
    std::vector<FrontierScore> out;
    out.reserve(waypoints.size());
    for (const auto& w : waypoints) {
        FrontierScore s;
        s.waypoint = w;
        s.o_d = score_distance(w, pose, params);
        s.o_s = score_semantics(w, memory, goal, table, params);
        s.o_f = score_footprint(w, log, params);
        s.dist = distance(w.world, pose.position());
        out.push_back(s);
    }
    return out;
}

std::optional<std::size_t> pick_frontier(const std::vector<FrontierScore>& scored,
                                         const ExplorationParams& params, DetRng& rng) {
    if (scored.empty()) return std::nullopt;

    if (params.selection == SelectionMode::NearestFrontier) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < scored.size(); ++i) {
            if (scored[i].dist < scored[best].dist ||
                (scored[i].dist == scored[best].dist &&
                 scored[i].waypoint.cell < scored[best].waypoint.cell))
                best = i;
        }
        return best;
    }

    if (params.selection == SelectionMode::Softmax) {
        double max_s = scored.front().total();
        for (const auto& s : scored) max_s = std::max(max_s, s.total());
        std::vector<double> w(scored.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < scored.size(); ++i) {
            w[i] = std::exp((scored[i].total() - max_s) / params.softmax_temp);
            sum += w[i];
        }
        double u = rng.unit() * sum;
        double acc = 0.0;
        for (std::size_t i = 0; i < scored.size(); ++i) {
            acc += w[i];
            if (u < acc) return i;
        }
        return scored.size() - 1;
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < scored.size(); ++i) {
        double a = scored[i].total();
        double b = scored[best].total();
        if (a > b) {
            best = i;
        } else if (a == b) {
            if (scored[i].dist < scored[best].dist ||
                (scored[i].dist == scored[best].dist &&
                 scored[i].waypoint.cell < scored[best].waypoint.cell))
                best = i;
        }
    }
    return best;
}

std::optional<FrontierWaypoint> choose_frontier(
    const std::vector<FrontierWaypoint>& waypoints, TriedFrontierSet& tried, const Pose& pose,
    const std::vector<LabeledPoint>& memory, const std::string& goal,
    const CooccurrenceTable& table, const FootprintLog& log, const ExplorationParams& params,
    double grid_resolution, DetRng& rng, std::vector<FrontierScore>* dump) {
    std::vector<FrontierWaypoint> candidates;
    for (const auto& w : waypoints)
        if (!tried.contains(w.world, grid_resolution)) candidates.push_back(w);
    if (candidates.empty()) return std::nullopt;

    auto scored = score_frontiers(candidates, pose, memory, goal, table, log, params);
    if (dump) dump->insert(dump->end(), scored.begin(), scored.end());
    auto idx = pick_frontier(scored, params, rng);
    if (!idx) return std::nullopt;
    const FrontierWaypoint& chosen = scored[*idx].waypoint;
    tried.insert(chosen.world, grid_resolution);
    return chosen;
}

} // namespace oval
