#include "oval/grid_map.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace oval {

bool DepthScan::valid() const {
    if (bearings.size() != ranges.size()) return false;
    if (!heights.empty() && heights.size() != ranges.size()) return false;
    if (bearings.size() >= 2) {
        for (std::size_t i = 1; i < bearings.size(); ++i)
            if (bearings[i] <= bearings[i - 1]) return false;
        if (std::abs((bearings.back() - bearings.front()) - fov) > 1e-9) return false;
    }
    return true;
}

OccupancyGrid::OccupancyGrid(Vec2 origin, double resolution, int width, int height)
    : grid_(origin, resolution, width, height, CellState::Unknown),
      unknown_(static_cast<std::size_t>(width) * height) {}

OccupancyGrid OccupancyGrid::centered(Vec2 center, double resolution, int cells_per_side) {
    double half = 0.5 * cells_per_side * resolution;
    return OccupancyGrid({center.x - half, center.y - half}, resolution, cells_per_side,
                         cells_per_side);
}

void OccupancyGrid::apply(CellIndex c, CellState s) {
    CellState& cur = grid_.at(c);
    if (cur == s) return;
    switch (cur) {
        case CellState::Unknown: --unknown_; break;
        case CellState::Free: --free_; break;
        case CellState::Obstacle: --obstacle_; break;
    }
    cur = s;
    switch (s) {
        case CellState::Unknown: ++unknown_; break;
        case CellState::Free: ++free_; break;
        case CellState::Obstacle: ++obstacle_; break;
    }
}

void OccupancyGrid::mark_free(CellIndex c) {
    if (grid_.at(c) == CellState::Obstacle) return; // sticky
    apply(c, CellState::Free);
}

void OccupancyGrid::mark_obstacle(CellIndex c) { apply(c, CellState::Obstacle); }

void OccupancyGrid::set_state(CellIndex c, CellState s) { apply(c, s); }

void OccupancyGrid::ensure_world_coverage(Vec2 lo, Vec2 hi) {
    std::size_t before = grid_.size();
    grid_.ensure_world_coverage(lo, hi);
    unknown_ += grid_.size() - before;
}

namespace {

// Amanatides-Woo traversal from world point a to b; visit(cell, is_last).
template <typename Visit>
void march_cells(const OccupancyGrid& grid, Vec2 a, Vec2 b, Visit visit) {
    CellIndex cur = grid.world_to_cell(a);
    CellIndex last = grid.world_to_cell(b);
    double res = grid.resolution();
    Vec2 org = grid.origin();

    Vec2 d = b - a;
    double len = d.norm();
    if (len < 1e-12) {
        visit(cur, true);
        return;
    }
    Vec2 dir{d.x / len, d.y / len};

    int step_col = dir.x > 0 ? 1 : (dir.x < 0 ? -1 : 0);
    int step_row = dir.y > 0 ? 1 : (dir.y < 0 ? -1 : 0);

    auto boundary = [&](int idx, int step, double o) {
        return o + (idx + (step > 0 ? 1 : 0)) * res;
    };
    double tx = step_col != 0
                    ? (boundary(cur.col, step_col, org.x) - a.x) / dir.x
                    : 1e18;
    double ty = step_row != 0
                    ? (boundary(cur.row, step_row, org.y) - a.y) / dir.y
                    : 1e18;
    double tdx = step_col != 0 ? res / std::abs(dir.x) : 1e18;
    double tdy = step_row != 0 ? res / std::abs(dir.y) : 1e18;

    int guard = 4 * (grid.width() + grid.height());
    while (guard-- > 0) {
        bool is_last = (cur == last);
        visit(cur, is_last);
        if (is_last) break;
        if (tx < ty) {
            cur.col += step_col;
            tx += tdx;
        } else {
            cur.row += step_row;
            ty += tdy;
        }
        if (!grid.in_bounds(cur)) break;
    }
}

} // namespace

void integrate_observation(OccupancyGrid& grid, const Pose& pose, const DepthScan& scan,
                           const HeightBand& band) {
    if (!pose.finite()) raise(Errc::InvalidPose, "non-finite pose");
    if (scan.empty()) return;

    struct Ray {
        Vec2 end;
        bool hit;
    };
    std::vector<Ray> rays;
    rays.reserve(scan.bearings.size());

    Vec2 start = pose.position();
    Vec2 lo = start, hi = start;
    for (std::size_t i = 0; i < scan.bearings.size(); ++i) {
        double range = scan.ranges[i];
        bool hit = std::isfinite(range) && range < scan.max_range - 1e-9;
        if (hit) {
            double z = scan.heights.empty() ? scan.default_point_height : scan.heights[i];
            if (!band.contains(z)) {
                hit = false;           // out-of-band return: see through it
                range = scan.max_range;
            }
        } else {
            range = scan.max_range;
        }
        double ang = pose.heading + scan.bearings[i];
        Vec2 end{start.x + range * std::cos(ang), start.y + range * std::sin(ang)};
        rays.push_back({end, hit});
        lo.x = std::min(lo.x, end.x);
        lo.y = std::min(lo.y, end.y);
        hi.x = std::max(hi.x, end.x);
        hi.y = std::max(hi.y, end.y);
    }

    double margin = 2.0 * grid.resolution();
    grid.ensure_world_coverage({lo.x - margin, lo.y - margin}, {hi.x + margin, hi.y + margin});

    for (const Ray& ray : rays) {
        march_cells(grid, start, ray.end, [&](CellIndex c, bool is_last) {
            if (is_last && ray.hit)
                grid.mark_obstacle(c);
            else
                grid.mark_free(c);
        });
    }
}

std::vector<CellIndex> detect_frontiers(const OccupancyGrid& grid) {
    std::vector<CellIndex> out;
    const int w = grid.width();
    const int h = grid.height();
    auto unknown_at = [&](int r, int c) {
        if (r < 0 || r >= h || c < 0 || c >= w) return true; // beyond map = unexplored
        return grid.at(r, c) == CellState::Unknown;
    };
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (grid.at(r, c) != CellState::Free) continue;
            if (unknown_at(r - 1, c) || unknown_at(r + 1, c) || unknown_at(r, c - 1) ||
                unknown_at(r, c + 1))
                out.push_back({r, c});
        }
    return out;
}

std::vector<FrontierWaypoint> cluster_frontiers(const OccupancyGrid& grid,
                                                const std::vector<CellIndex>& cells,
                                                double eps_cells, int min_pts) {
    if (eps_cells < 1.0 || min_pts < 1) raise(Errc::InvalidCall, "bad clustering params");

    std::vector<CellIndex> pts = cells;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const int n = static_cast<int>(pts.size());
    if (n == 0) return {};

    std::unordered_map<std::int64_t, int> index;
    index.reserve(pts.size());
    auto key = [](CellIndex c) {
        return (static_cast<std::int64_t>(c.row) << 32) |
               static_cast<std::int64_t>(static_cast<std::uint32_t>(c.col));
    };
    for (int i = 0; i < n; ++i) index[key(pts[i])] = i;

    const int reach = static_cast<int>(std::floor(eps_cells));
    const double eps_sq = eps_cells * eps_cells;
    // Neighbors in row-major order (includes the query point).
    auto region_query = [&](CellIndex p) {
        std::vector<int> out;
        for (int dr = -reach; dr <= reach; ++dr)
            for (int dc = -reach; dc <= reach; ++dc) {
                if (dr * dr + dc * dc > eps_sq) continue;
                auto it = index.find(key({p.row + dr, p.col + dc}));
                if (it != index.end()) out.push_back(it->second);
            }
        return out;
    };

    constexpr int kUnvisited = -2;
    constexpr int kNoise = -1;
    std::vector<int> label(pts.size(), kUnvisited);
    int cluster_id = 0;

    for (int i = 0; i < n; ++i) {
        if (label[i] != kUnvisited) continue;
        auto neigh = region_query(pts[i]);
        if (static_cast<int>(neigh.size()) < min_pts) {
            label[i] = kNoise;
            continue;
        }
        label[i] = cluster_id;
        std::vector<int> seeds = neigh;
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            int q = seeds[s];
            if (label[q] == kNoise) label[q] = cluster_id; // border point
            if (label[q] != kUnvisited) continue;
            label[q] = cluster_id;
            auto nq = region_query(pts[q]);
            if (static_cast<int>(nq.size()) >= min_pts)
                seeds.insert(seeds.end(), nq.begin(), nq.end());
        }
        ++cluster_id;
    }

    std::vector<std::vector<int>> members(cluster_id);
    for (int i = 0; i < n; ++i)
        if (label[i] >= 0) members[label[i]].push_back(i);

    std::vector<FrontierWaypoint> out;
    for (auto& m : members) {
        if (m.empty()) continue;
        double cr = 0.0, cc = 0.0;
        for (int i : m) {
            cr += pts[i].row;
            cc += pts[i].col;
        }
        cr /= m.size();
        cc /= m.size();
        int best = m.front();
        double best_d = 1e18;
        for (int i : m) {
            double dr = pts[i].row - cr;
            double dc = pts[i].col - cc;
            double d = dr * dr + dc * dc;
            if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && pts[i] < pts[best])) {
                best_d = d;
                best = i;
            }
        }
        out.push_back({pts[best], grid.cell_to_world(pts[best]), static_cast<int>(m.size())});
    }
    std::sort(out.begin(), out.end(), [](const FrontierWaypoint& a, const FrontierWaypoint& b) {
        if (a.cluster_size != b.cluster_size) return a.cluster_size > b.cluster_size;
        return a.cell < b.cell;
    });
    return out;
}

std::string grid_to_pgm(const OccupancyGrid& grid) {
    std::ostringstream os;
    os << "P2\n" << grid.width() << ' ' << grid.height() << "\n255\n";
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            int v = 128;
            if (grid.at(r, c) == CellState::Free) v = 255;
            else if (grid.at(r, c) == CellState::Obstacle) v = 0;
            os << v << (c + 1 == grid.width() ? '\n' : ' ');
        }
    }
    return os.str();
}

std::string grid_to_rle(const OccupancyGrid& grid) {
    std::ostringstream os;
    auto code = [](CellState s) {
        switch (s) {
            case CellState::Free: return 'F';
            case CellState::Obstacle: return 'O';
            default: return 'U';
        }
    };
    char run_code = 0;
    long run_len = 0;
    for (int r = 0; r < grid.height(); ++r)
        for (int c = 0; c < grid.width(); ++c) {
            char cc = code(grid.at(r, c));
            if (cc == run_code) {
                ++run_len;
            } else {
                if (run_len > 0) os << run_code << run_len;
                run_code = cc;
                run_len = 1;
            }
        }
    if (run_len > 0) os << run_code << run_len;
    return os.str();
}

} // namespace oval
