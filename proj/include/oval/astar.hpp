#pragma once

#include <optional>
#include <vector>

#include "oval/geometry.hpp"
#include "oval/grid_map.hpp"

namespace oval {

struct PlannerParams {
    double inflation_radius = 0.18; // m
    double approach_radius = 0.5;   // m, acceptable stop distance from target
};

// 8-connected A* over Free cells with obstacles inflated by the agent
// radius. Plans from the start pose's cell (always admitted, even inside
// the inflation margin) to the nearest plannable cell within
// approach_radius of the target. Returns cell-center waypoints including
// both endpoints, or nullopt when no such cell is reachable.
std::optional<std::vector<Vec2>> plan_path(const OccupancyGrid& grid, const Pose& start,
                                           const Vec2& target, const PlannerParams& params);

double path_length(const std::vector<Vec2>& waypoints);

// Inflation mask used by the planner; exposed for collision audits.
std::vector<std::uint8_t> inflated_blocked_mask(const OccupancyGrid& grid,
                                                double inflation_radius);

} // namespace oval
