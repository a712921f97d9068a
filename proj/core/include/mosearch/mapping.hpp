#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mosearch/grid.hpp"
#include "mosearch/simulator.hpp"

namespace mosearch {

enum class MapState : uint8_t { Unexplored = 0, Free = 1, Trace = 2, Wall = 3, Object = 4 };

struct MapCell {
    MapState state = MapState::Unexplored;
    int8_t class_id = kNoClass;
    int16_t instance_id = kNoInstance;
    bool found = false;
    bool operator==(const MapCell&) const = default;
};

// Fixed color-coding: black unexplored, blue free, green walls, red trace,
// grey found targets, one color per object class, white prediction arrow.
inline constexpr int kPaletteUnexplored = 0;
inline constexpr int kPaletteFree = 1;
inline constexpr int kPaletteWall = 2;
inline constexpr int kPaletteTrace = 3;
inline constexpr int kPaletteFound = 4;
inline constexpr int kPaletteClassBase = 5;  // 5 .. 5 + kNumClasses - 1
inline constexpr int kPaletteArrow = 5 + kNumClasses;
inline constexpr int kPaletteSize = kPaletteArrow + 1;

std::array<uint8_t, 3> palette_rgb(int code);
char palette_ascii(int code);
std::optional<int> palette_from_ascii(char c);

/// Agent-built color-coded map at the simulation grid resolution. Explored
/// cells never revert; found recoloring is permanent.
class GlobalMap {
public:
    GlobalMap() = default;
    GlobalMap(int width, int height, double resolution = kGridResolution);

    int width() const { return cells_.width(); }
    int height() const { return cells_.height(); }
    double resolution() const { return resolution_; }
    const MapCell& at(Cell c) const { return cells_.at(c); }
    bool in_bounds(Cell c) const { return cells_.in_bounds(c); }

    Cell cell_of(Vec2 p) const {
        return {static_cast<int>(std::floor(p.x / resolution_)),
                static_cast<int>(std::floor(p.y / resolution_))};
    }

    /// Rays mark traversed cells free and the hit cell wall/object; the agent
    /// cell is annotated as trace. Idempotent for a fixed (pose, frame).
    void integrate(Pose pose, const SensorFrame& frame);

    /// Permanently recolors all cells of the instance grey. Throws
    /// UnknownInstance if the instance was never integrated.
    void mark_found(int instance_id);

    bool instance_known(int instance_id) const;

    int explored_count() const { return explored_count_; }
    int palette_code(Cell c) const;

    /// Cells that became walls, in integration order. Consumers (incremental
    /// planners) keep a cursor into this log.
    const std::vector<Cell>& wall_events() const { return wall_events_; }

    std::string dump_ascii() const;

private:
    void mark_free(Cell c);
    void mark_wall(Cell c);
    void mark_object(Cell c, int class_id, int instance_id);
    void mark_trace(Cell c);

    Grid<MapCell> cells_;
    double resolution_ = kGridResolution;
    int explored_count_ = 0;
    std::vector<int> found_instances_;
    std::vector<Cell> wall_events_;
};

struct CropSpec {
    int size = 0;          // square, pixels
    double resolution = 0; // meters per pixel
    bool operator==(const CropSpec&) const = default;
};

struct ObsConfig {
    CropSpec coarse{224, 0.066};  // covers 14.8 m x 14.8 m
    CropSpec fine{84, kGridResolution};  // covers 2.77 m x 2.77 m
    int arrow_len_fine_cells = 10;
    bool operator==(const ObsConfig&) const = default;
};

struct EgoCrop {
    int size = 0;
    double resolution = 0.0;
    std::vector<uint8_t> palette;  // size*size, row-major palette codes

    uint8_t at(int r, int c) const { return palette[static_cast<size_t>(r) * size + c]; }
};

struct EgoCropPair {
    EgoCrop coarse;
    EgoCrop fine;
};

/// Agent-centered crops, rotated so the heading points up, nearest-neighbor
/// sampled. Coarse pixels reduce blocks of map cells by state priority
/// (object > wall > trace > free > unexplored) so thin walls survive
/// downsampling. Out-of-bounds regions read as unexplored. When a previous
/// prediction is given, an arrow of length arrow_len_fine_cells (fine cells)
/// is overlaid from the center at the bin-center angle.
EgoCropPair extract_ego(const GlobalMap& map, Pose pose, std::optional<int> prev_prediction_bin,
                        const ObsConfig& config = {});

/// Map snapshot: one-line JSON header {pose, step, width, height} followed by
/// the ASCII palette grid. Consumed by the replay tool and golden tests.
std::string dump_snapshot(const GlobalMap& map, Pose pose, int step);

}  // namespace mosearch
