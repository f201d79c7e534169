#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oval/grid2d.hpp"
#include "oval/geometry.hpp"

namespace oval {

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Obstacle = 2 };

// One horizontal scan row standing in for a depth image. Bearings are
// relative to the agent heading, strictly increasing and spanning the
// field of view; a range >= max_range (or non-finite) means no return.
// heights carries the world-frame z of each hit point and may be empty,
// in which case default_point_height applies.
struct DepthScan {
    std::vector<double> bearings;
    std::vector<double> ranges;
    std::vector<double> heights;
    double max_range = 5.0;
    double fov = kPi / 2.0;
    double default_point_height = 0.9;

    bool empty() const { return bearings.empty(); }
    bool valid() const;
};

struct HeightBand {
    double lo = 0.2;
    double hi = 1.5;
    bool contains(double z) const { return z >= lo && z <= hi; }
};

struct FrontierWaypoint {
    CellIndex cell;
    Vec2 world;
    int cluster_size = 0;
};

// Occupancy grid with sticky obstacles: within an episode group a cell
// that became Obstacle is never flipped back to Free by integration.
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    OccupancyGrid(Vec2 origin, double resolution, int width, int height);

    // Grid centered on a world point (the usual episode-group start).
    static OccupancyGrid centered(Vec2 center, double resolution, int cells_per_side);

    int width() const { return grid_.width(); }
    int height() const { return grid_.height(); }
    double resolution() const { return grid_.resolution(); }
    Vec2 origin() const { return grid_.origin(); }

    CellState at(CellIndex c) const { return grid_.at(c); }
    CellState at(int row, int col) const { return grid_.at(row, col); }
    bool in_bounds(CellIndex c) const { return grid_.in_bounds(c); }

    CellIndex world_to_cell(const Vec2& p) const { return grid_.world_to_cell(p); }
    std::optional<CellIndex> try_world_to_cell(const Vec2& p) const {
        return grid_.try_world_to_cell(p);
    }
    Vec2 cell_to_world(CellIndex c) const { return grid_.cell_to_world(c); }

    std::size_t unknown_count() const { return unknown_; }
    std::size_t free_count() const { return free_; }
    std::size_t obstacle_count() const { return obstacle_; }
    std::size_t explored_count() const { return free_ + obstacle_; }

    void mark_free(CellIndex c);     // no-op on Obstacle cells
    void mark_obstacle(CellIndex c); // unconditional
    void set_state(CellIndex c, CellState s); // test/scene setup, not sticky

    void ensure_world_coverage(Vec2 lo, Vec2 hi);

private:
    Grid2D<CellState> grid_;
    std::size_t unknown_ = 0;
    std::size_t free_ = 0;
    std::size_t obstacle_ = 0;

    void apply(CellIndex c, CellState s);
};

// Marks cells along each ray Free up to the return and the terminal cell
// Obstacle when the return is closer than max_range and its point height
// falls inside the band; out-of-band returns are treated as max-range
// rays. Grows the grid as needed. Empty scans are a no-op.
void integrate_observation(OccupancyGrid& grid, const Pose& pose, const DepthScan& scan,
                           const HeightBand& band);

// Free cells with at least one Unknown 4-neighbor, row-major order.
// Cells beyond the grid edge count as Unknown.
std::vector<CellIndex> detect_frontiers(const OccupancyGrid& grid);

// Density-based clustering over frontier cells (Euclidean cell distance,
// neighborhoods include the point itself). Noise is dropped; each cluster
// yields the member cell nearest its centroid. Output sorted by
// cluster_size descending, then row-major waypoint cell.
std::vector<FrontierWaypoint> cluster_frontiers(const OccupancyGrid& grid,
                                                const std::vector<CellIndex>& cells,
                                                double eps_cells, int min_pts);

// Portable graymap (P2) snapshot: Unknown=128, Free=255, Obstacle=0.
// Row 0 of the grid is the first raster row.
std::string grid_to_pgm(const OccupancyGrid& grid);

// Row-major run-length encoding, e.g. "U12F3O1...".
std::string grid_to_rle(const OccupancyGrid& grid);

} // namespace oval
