#pragma once

#include <cstdint>
#include <vector>

#include "mosearch/common.hpp"
#include "mosearch/grid.hpp"

namespace mosearch {

inline constexpr double kGridResolution = 0.033;  // meters per cell
inline constexpr int kNumClasses = 8;
inline constexpr double kObjectRadius = 0.15;  // object footprint, meters

enum class Occupancy : uint8_t { Free = 0, Wall = 1 };

constexpr int kNoClass = -1;
constexpr int kNoInstance = -1;

struct SemanticCell {
    Occupancy occupancy = Occupancy::Free;
    int8_t class_id = kNoClass;
    int16_t instance_id = kNoInstance;
    bool operator==(const SemanticCell&) const = default;
};

struct ObjectPlacement {
    int instance_id = kNoInstance;
    int class_id = kNoClass;
    Vec2 center;
    double footprint_radius = kObjectRadius;
    bool operator==(const ObjectPlacement&) const = default;
};

/// Ground-truth world: per-cell occupancy plus the semantic layer rendered
/// from object placements. Objects are sensed but not solid.
class SemanticGrid {
public:
    SemanticGrid() = default;
    SemanticGrid(int width, int height, double resolution = kGridResolution)
        : resolution_(resolution), cells_(width, height) {}

    double resolution() const { return resolution_; }
    int width() const { return cells_.width(); }
    int height() const { return cells_.height(); }

    bool in_bounds(Cell c) const { return cells_.in_bounds(c); }
    const SemanticCell& at(Cell c) const { return cells_.at(c); }
    SemanticCell& at(Cell c) { return cells_.at(c); }
    const SemanticCell& at(int x, int y) const { return cells_.at(x, y); }
    SemanticCell& at(int x, int y) { return cells_.at(x, y); }

    bool is_wall(Cell c) const { return !in_bounds(c) || at(c).occupancy == Occupancy::Wall; }
    bool is_free(Cell c) const { return in_bounds(c) && at(c).occupancy == Occupancy::Free; }

    Cell cell_of(Vec2 p) const {
        return {static_cast<int>(std::floor(p.x / resolution_)),
                static_cast<int>(std::floor(p.y / resolution_))};
    }
    Vec2 cell_center(Cell c) const {
        return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_};
    }

    const std::vector<ObjectPlacement>& objects() const { return objects_; }

    /// Stamps the object's disc footprint into the semantic layer.
    void add_object(const ObjectPlacement& obj) {
        objects_.push_back(obj);
        const int r_cells = static_cast<int>(std::ceil(obj.footprint_radius / resolution_));
        const Cell c0 = cell_of(obj.center);
        for (int dy = -r_cells; dy <= r_cells; ++dy) {
            for (int dx = -r_cells; dx <= r_cells; ++dx) {
                const Cell c{c0.x + dx, c0.y + dy};
                if (!in_bounds(c)) continue;
                if ((cell_center(c) - obj.center).norm() > obj.footprint_radius) continue;
                if (at(c).occupancy == Occupancy::Wall) continue;
                at(c).class_id = static_cast<int8_t>(obj.class_id);
                at(c).instance_id = static_cast<int16_t>(obj.instance_id);
            }
        }
    }

    /// True for cells in the largest connected free component (4-connected).
    Grid<uint8_t> main_component_mask() const;

    /// Fraction of free cells inside the given mask.
    double free_fraction_in(const Grid<uint8_t>& mask) const;

    bool operator==(const SemanticGrid&) const = default;

private:
    double resolution_ = kGridResolution;
    Grid<SemanticCell> cells_;
    std::vector<ObjectPlacement> objects_;
};

}  // namespace mosearch
