#include "oval/astar.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace oval {

std::vector<std::uint8_t> inflated_blocked_mask(const OccupancyGrid& grid,
                                                double inflation_radius) {
    const int w = grid.width();
    const int h = grid.height();
    std::vector<std::uint8_t> blocked(static_cast<std::size_t>(w) * h, 0);
    const int reach = static_cast<int>(std::floor(inflation_radius / grid.resolution()));
    const double rad_sq = inflation_radius * inflation_radius;
    const double res = grid.resolution();
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (grid.at(r, c) != CellState::Obstacle) continue;
            for (int dr = -reach; dr <= reach; ++dr)
                for (int dc = -reach; dc <= reach; ++dc) {
                    double d2 = (dr * dr + dc * dc) * res * res;
                    if (d2 > rad_sq) continue;
                    int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
                    blocked[static_cast<std::size_t>(rr) * w + cc] = 1;
                }
        }
    return blocked;
}

std::optional<std::vector<Vec2>> plan_path(const OccupancyGrid& grid, const Pose& start,
                                           const Vec2& target, const PlannerParams& params) {
    auto start_cell_opt = grid.try_world_to_cell(start.position());
    if (!start_cell_opt) raise(Errc::OutOfBounds, "planner start outside grid");
    const CellIndex start_cell = *start_cell_opt;

    const int w = grid.width();
    const int h = grid.height();
    const double res = grid.resolution();
    auto idx = [&](int r, int c) { return static_cast<std::size_t>(r) * w + c; };

    auto blocked = inflated_blocked_mask(grid, params.inflation_radius);
    // cells under the agent footprint are admitted regardless of state, so
    // a pose inside the inflation margin can still plan its way out
    auto traversable = [&](int r, int c) {
        if (grid.at(r, c) == CellState::Free && !blocked[idx(r, c)]) return true;
        return distance(grid.cell_to_world({r, c}), start.position()) <=
               params.inflation_radius;
    };

    // goal set: plannable cells within approach_radius of the target
    std::vector<std::uint8_t> is_goal(static_cast<std::size_t>(w) * h, 0);
    bool any_goal = false;
    {
        int reach = static_cast<int>(std::ceil(params.approach_radius / res)) + 1;
        auto t = grid.try_world_to_cell(target);
        int tr = t ? t->row : static_cast<int>(std::floor((target.y - grid.origin().y) / res));
        int tc = t ? t->col : static_cast<int>(std::floor((target.x - grid.origin().x) / res));
        for (int r = std::max(0, tr - reach); r <= std::min(h - 1, tr + reach); ++r)
            for (int c = std::max(0, tc - reach); c <= std::min(w - 1, tc + reach); ++c) {
                if (!traversable(r, c) && !(r == start_cell.row && c == start_cell.col)) continue;
                if (distance(grid.cell_to_world({r, c}), target) > params.approach_radius)
                    continue;
                is_goal[idx(r, c)] = 1;
                any_goal = true;
            }
    }
    if (!any_goal) return std::nullopt;

    const double kSqrt2 = std::sqrt(2.0);
    auto heuristic = [&](int r, int c) {
        // octile-style lower bound to the target point, minus the approach ring
        Vec2 p = grid.cell_to_world({r, c});
        double dx = std::abs(p.x - target.x);
        double dy = std::abs(p.y - target.y);
        double oct = std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
        return std::max(0.0, oct - kSqrt2 * params.approach_radius - res);
    };

    struct Node {
        double f;
        double g;
        int r, c;
        bool operator>(const Node& o) const {
            if (f != o.f) return f > o.f;
            if (r != o.r) return r > o.r;
            return c > o.c;
        }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
    std::vector<double> g(static_cast<std::size_t>(w) * h, 1e18);
    std::vector<int> parent(static_cast<std::size_t>(w) * h, -1);

    g[idx(start_cell.row, start_cell.col)] = 0.0;
    open.push({heuristic(start_cell.row, start_cell.col), 0.0, start_cell.row, start_cell.col});

    const int dr8[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    const int dc8[] = {-1, 0, 1, -1, 1, -1, 0, 1};

    int goal_found = -1;
    while (!open.empty()) {
        Node cur = open.top();
        open.pop();
        std::size_t ci = idx(cur.r, cur.c);
        if (cur.g > g[ci] + 1e-12) continue;
        if (is_goal[ci]) {
            goal_found = static_cast<int>(ci);
            break;
        }
        for (int k = 0; k < 8; ++k) {
            int nr = cur.r + dr8[k];
            int nc = cur.c + dc8[k];
            if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
            if (!traversable(nr, nc)) continue;
            // no diagonal corner cutting past blocked cells
            if (dr8[k] != 0 && dc8[k] != 0) {
                if (!traversable(cur.r, nc) || !traversable(nr, cur.c)) continue;
            }
            double step = (dr8[k] != 0 && dc8[k] != 0) ? kSqrt2 * res : res;
            double ng = cur.g + step;
            std::size_t ni = idx(nr, nc);
            if (ng < g[ni] - 1e-12) {
                g[ni] = ng;
                parent[ni] = static_cast<int>(ci);
                open.push({ng + heuristic(nr, nc), ng, nr, nc});
            }
        }
    }
    if (goal_found < 0) return std::nullopt;

    std::vector<Vec2> path;
    for (int at = goal_found; at >= 0; at = parent[at])
        path.push_back(grid.cell_to_world({at / w, at % w}));
    std::reverse(path.begin(), path.end());
    return path;
}

double path_length(const std::vector<Vec2>& waypoints) {
    double len = 0.0;
    for (std::size_t i = 1; i < waypoints.size(); ++i)
        len += distance(waypoints[i - 1], waypoints[i]);
    return len;
}

} // namespace oval
