#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "oval/error.hpp"
#include "oval/geometry.hpp"

namespace oval {

// Dense 2D array anchored in the world frame. Cell (row, col) covers
// [origin + col*res, origin + (col+1)*res) x [..row..). Growth keeps
// existing cells at their world positions: the origin only ever shifts
// by whole-cell multiples.
template <typename T>
class Grid2D {
public:
    Grid2D() = default;

    Grid2D(Vec2 origin, double resolution, int width, int height, T fill)
        : origin_(origin),
          res_(resolution),
          w_(width),
          h_(height),
          fill_(fill),
          cells_(static_cast<std::size_t>(width) * height, fill) {}

    int width() const { return w_; }
    int height() const { return h_; }
    double resolution() const { return res_; }
    Vec2 origin() const { return origin_; }
    std::size_t size() const { return cells_.size(); }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < h_ && col >= 0 && col < w_;
    }
    bool in_bounds(CellIndex c) const { return in_bounds(c.row, c.col); }

    T& at(int row, int col) { return cells_[static_cast<std::size_t>(row) * w_ + col]; }
    const T& at(int row, int col) const {
        return cells_[static_cast<std::size_t>(row) * w_ + col];
    }
    T& at(CellIndex c) { return at(c.row, c.col); }
    const T& at(CellIndex c) const { return at(c.row, c.col); }

    const std::vector<T>& cells() const { return cells_; }

    std::optional<CellIndex> try_world_to_cell(const Vec2& p) const {
        int col = static_cast<int>(std::floor((p.x - origin_.x) / res_));
        int row = static_cast<int>(std::floor((p.y - origin_.y) / res_));
        if (!in_bounds(row, col)) return std::nullopt;
        return CellIndex{row, col};
    }

    CellIndex world_to_cell(const Vec2& p) const {
        auto c = try_world_to_cell(p);
        if (!c) raise(Errc::OutOfBounds, "world point outside grid");
        return *c;
    }

    Vec2 cell_to_world(CellIndex c) const {
        if (!in_bounds(c)) raise(Errc::OutOfBounds, "cell index outside grid");
        return {origin_.x + (c.col + 0.5) * res_, origin_.y + (c.row + 0.5) * res_};
    }

    // World-frame cell key independent of the grid's current extent; stable
    // across growth.
    static std::pair<std::int64_t, std::int64_t> world_cell_key(const Vec2& p, double res) {
        return {static_cast<std::int64_t>(std::floor(p.x / res)),
                static_cast<std::int64_t>(std::floor(p.y / res))};
    }

    // Grows (at least doubling along any axis that needs it) until the
    // world box [lo, hi] is covered.
    void ensure_world_coverage(Vec2 lo, Vec2 hi) {
        int c0 = static_cast<int>(std::floor((lo.x - origin_.x) / res_));
        int r0 = static_cast<int>(std::floor((lo.y - origin_.y) / res_));
        int c1 = static_cast<int>(std::floor((hi.x - origin_.x) / res_));
        int r1 = static_cast<int>(std::floor((hi.y - origin_.y) / res_));
        if (c0 >= 0 && r0 >= 0 && c1 < w_ && r1 < h_) return;

        int add_left = std::max(0, -c0);
        int add_right = std::max(0, c1 - (w_ - 1));
        int add_bottom = std::max(0, -r0);
        int add_top = std::max(0, r1 - (h_ - 1));

        int new_w = w_ + add_left + add_right;
        int new_h = h_ + add_bottom + add_top;
        if (add_left + add_right > 0 && new_w < 2 * w_) {
            int extra = 2 * w_ - new_w;
            if (add_right >= add_left) add_right += extra; else add_left += extra;
            new_w = 2 * w_;
        }
        if (add_bottom + add_top > 0 && new_h < 2 * h_) {
            int extra = 2 * h_ - new_h;
            if (add_top >= add_bottom) add_top += extra; else add_bottom += extra;
            new_h = 2 * h_;
        }

        std::vector<T> next(static_cast<std::size_t>(new_w) * new_h, fill_);
        for (int r = 0; r < h_; ++r) {
            auto* src = &cells_[static_cast<std::size_t>(r) * w_];
            auto* dst = &next[static_cast<std::size_t>(r + add_bottom) * new_w + add_left];
            std::copy(src, src + w_, dst);
        }
        cells_ = std::move(next);
        origin_.x -= add_left * res_;
        origin_.y -= add_bottom * res_;
        w_ = new_w;
        h_ = new_h;
    }

private:
    Vec2 origin_{0.0, 0.0};
    double res_ = 0.1;
    int w_ = 0;
    int h_ = 0;
    T fill_{};
    std::vector<T> cells_;
};

} // namespace oval
