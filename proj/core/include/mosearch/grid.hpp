#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace mosearch {

struct Cell {
    int x = 0;
    int y = 0;
    bool operator==(const Cell&) const = default;
};

/// Row-major 2D array. x indexes columns, y indexes rows.
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height), cells_(static_cast<size_t>(width) * height, fill) {}

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return cells_.size(); }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }
    bool in_bounds(Cell c) const { return in_bounds(c.x, c.y); }

    T& at(int x, int y) {
        assert(in_bounds(x, y));
        return cells_[static_cast<size_t>(y) * width_ + x];
    }
    const T& at(int x, int y) const {
        assert(in_bounds(x, y));
        return cells_[static_cast<size_t>(y) * width_ + x];
    }
    T& at(Cell c) { return at(c.x, c.y); }
    const T& at(Cell c) const { return at(c.x, c.y); }

    T& operator[](size_t i) { return cells_[i]; }
    const T& operator[](size_t i) const { return cells_[i]; }

    void fill(const T& v) { cells_.assign(cells_.size(), v); }

    const std::vector<T>& data() const { return cells_; }
    std::vector<T>& data() { return cells_; }

    bool operator==(const Grid&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> cells_;
};

}  // namespace mosearch
