#include "mosearch/worldgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mosearch/planner.hpp"

namespace mosearch {

namespace {

struct Rect {
    int x = 0, y = 0, w = 0, h = 0;
    int x1() const { return x + w; }
    int y1() const { return y + h; }
    Cell center() const { return {x + w / 2, y + h / 2}; }
    long area() const { return static_cast<long>(w) * h; }
};

constexpr int kWallThickness = 2;  // cells
constexpr int kRoomGap = 2;        // inset of a room inside its BSP leaf, cells

int to_cells(double meters, double res) { return static_cast<int>(std::lround(meters / res)); }

void carve_rect(Grid<uint8_t>& free, Rect r) {
    // Clamp to the interior so the boundary wall ring survives.
    const int x0 = std::max(r.x, kWallThickness);
    const int y0 = std::max(r.y, kWallThickness);
    const int x1 = std::min(r.x1(), free.width() - kWallThickness);
    const int y1 = std::min(r.y1(), free.height() - kWallThickness);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) free.at(x, y) = 1;
}

// Band of the given width centered on the segment between two cells,
// axis-aligned (used for both corridor arms).
Rect band(Cell a, Cell b, int width) {
    const int half = width / 2;
    if (a.y == b.y) {
        const int x0 = std::min(a.x, b.x);
        const int x1 = std::max(a.x, b.x) + 1;
        return {x0 - half, a.y - half, (x1 - x0) + width, width};
    }
    const int y0 = std::min(a.y, b.y);
    const int y1 = std::max(a.y, b.y) + 1;
    return {a.x - half, y0 - half, width, (y1 - y0) + width};
}

// Carves a door through the wall between two axis-adjacent rooms. Returns
// false when the shared edge cannot host a door of the given width.
bool try_carve_door(Grid<uint8_t>& free, const Rect& a, const Rect& b, int door_w, Rng& rng) {
    const int ox0 = std::max(a.x, b.x), ox1 = std::min(a.x1(), b.x1());
    const int oy0 = std::max(a.y, b.y), oy1 = std::min(a.y1(), b.y1());
    constexpr int kMaxDoorDepth = 3 * kWallThickness + 2;
    if (ox1 - ox0 >= door_w) {  // vertically separated, door opens in y
        const int gap0 = std::min(a.y1(), b.y1());
        const int gap1 = std::max(a.y, b.y);
        if (gap1 - gap0 <= 0 || gap1 - gap0 > kMaxDoorDepth) return false;
        const int x0 = static_cast<int>(rng.uniform_int(ox0, ox1 - door_w));
        carve_rect(free, {x0, gap0, door_w, gap1 - gap0});
        return true;
    }
    if (oy1 - oy0 >= door_w) {
        const int gap0 = std::min(a.x1(), b.x1());
        const int gap1 = std::max(a.x, b.x);
        if (gap1 - gap0 <= 0 || gap1 - gap0 > kMaxDoorDepth) return false;
        const int y0 = static_cast<int>(rng.uniform_int(oy0, oy1 - door_w));
        carve_rect(free, {gap0, y0, gap1 - gap0, door_w});
        return true;
    }
    return false;
}

void carve_connection(Grid<uint8_t>& free, const Rect& a, const Rect& b, int corridor_w,
                      int door_w, Rng& rng) {
    if (try_carve_door(free, a, b, door_w, rng)) return;
    const Cell ca = a.center(), cb = b.center();
    if (rng.bernoulli(0.5)) {
        carve_rect(free, band(ca, {cb.x, ca.y}, corridor_w));
        carve_rect(free, band({cb.x, ca.y}, cb, corridor_w));
    } else {
        carve_rect(free, band(ca, {ca.x, cb.y}, corridor_w));
        carve_rect(free, band({ca.x, cb.y}, cb, corridor_w));
    }
}

void validate(const GenConfig& c) {
    std::ostringstream bad;
    if (c.rooms < 0 || c.rooms > c.max_rooms) bad << "rooms out of range; ";
    if (c.min_rooms < 1 || c.max_rooms < c.min_rooms) bad << "room count bounds; ";
    if (c.room_min_side < 1.0 || c.room_max_side < c.room_min_side) bad << "room side bounds; ";
    if (c.corridor_width < 1.0) bad << "corridor width < 1.0 m; ";
    if (c.door_width < 0.8) bad << "door width < 0.8 m; ";
    if (c.resolution <= 0.0) bad << "resolution <= 0; ";
    const std::string s = bad.str();
    if (!s.empty()) throw GenerationFailure("invalid gen config: " + s);
}

}  // namespace

SemanticGrid generate_floorplan(uint64_t seed, const GenConfig& config) {
    validate(config);
    const double res = config.resolution;
    const int min_room_c = to_cells(config.room_min_side, res);
    const int max_room_c = to_cells(config.room_max_side, res);
    const int corridor_c = to_cells(config.corridor_width, res);
    const int door_c = to_cells(config.door_width, res);
    const int min_leaf = min_room_c + 2 * kRoomGap;

    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
        Rng rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(attempt + 1)));
        const int rooms =
            config.rooms > 0 ? config.rooms
                             : static_cast<int>(rng.uniform_int(config.min_rooms, config.max_rooms));

        const double span = std::sqrt(static_cast<double>(rooms)) * config.room_max_side * 0.95 + 2.0;
        const double min_span = config.room_max_side + 2.0 * (kWallThickness + kRoomGap) * res + 0.5;
        const double w_m = std::clamp(span * rng.uniform(0.95, 1.2), min_span, 28.0);
        const double h_m = std::clamp(span * rng.uniform(0.8, 1.05), min_span, 24.0);
        const int W = to_cells(w_m, res);
        const int H = to_cells(h_m, res);

        // BSP split of the interior until we have one leaf per room.
        std::vector<Rect> leaves{{kWallThickness, kWallThickness, W - 2 * kWallThickness,
                                  H - 2 * kWallThickness}};
        bool split_failed = false;
        while (static_cast<int>(leaves.size()) < rooms) {
            int pick = -1;
            long best_area = 0;
            for (size_t i = 0; i < leaves.size(); ++i) {
                const Rect& l = leaves[i];
                if ((l.w >= 2 * min_leaf || l.h >= 2 * min_leaf) && l.area() > best_area) {
                    best_area = l.area();
                    pick = static_cast<int>(i);
                }
            }
            if (pick < 0) {
                split_failed = true;
                break;
            }
            Rect l = leaves[pick];
            const bool split_x = l.w >= 2 * min_leaf && (l.h < 2 * min_leaf || l.w >= l.h);
            Rect a = l, b = l;
            if (split_x) {
                const int cut = static_cast<int>(rng.uniform_int(min_leaf, l.w - min_leaf));
                a.w = cut;
                b.x = l.x + cut;
                b.w = l.w - cut;
            } else {
                const int cut = static_cast<int>(rng.uniform_int(min_leaf, l.h - min_leaf));
                a.h = cut;
                b.y = l.y + cut;
                b.h = l.h - cut;
            }
            leaves[pick] = a;
            leaves.push_back(b);
        }
        if (split_failed) continue;

        Grid<uint8_t> free(W, H, 0);
        std::vector<Rect> room_rects;
        room_rects.reserve(leaves.size());
        for (const Rect& l : leaves) {
            const int avail_w = l.w - 2 * kRoomGap;
            const int avail_h = l.h - 2 * kRoomGap;
            const int rw = static_cast<int>(
                rng.uniform_int(std::min(min_room_c, avail_w), std::min(max_room_c, avail_w)));
            const int rh = static_cast<int>(
                rng.uniform_int(std::min(min_room_c, avail_h), std::min(max_room_c, avail_h)));
            const int rx = l.x + kRoomGap + static_cast<int>(rng.uniform_int(0, avail_w - rw));
            const int ry = l.y + kRoomGap + static_cast<int>(rng.uniform_int(0, avail_h - rh));
            Rect room{rx, ry, rw, rh};
            room_rects.push_back(room);
            carve_rect(free, room);
        }

        // Greedy spanning connections: attach each unconnected room to its
        // nearest connected one, then an occasional extra corridor for loops.
        std::vector<bool> connected(room_rects.size(), false);
        connected[0] = true;
        for (size_t step = 1; step < room_rects.size(); ++step) {
            int best_u = -1, best_c = -1;
            double best_d = kInf;
            for (size_t u = 0; u < room_rects.size(); ++u) {
                if (connected[u]) continue;
                for (size_t c = 0; c < room_rects.size(); ++c) {
                    if (!connected[c]) continue;
                    const Cell cu = room_rects[u].center(), cc = room_rects[c].center();
                    const double d = std::hypot(cu.x - cc.x, cu.y - cc.y);
                    if (d < best_d) {
                        best_d = d;
                        best_u = static_cast<int>(u);
                        best_c = static_cast<int>(c);
                    }
                }
            }
            carve_connection(free, room_rects[best_u], room_rects[best_c], corridor_c, door_c, rng);
            connected[best_u] = true;
        }
        if (room_rects.size() >= 4 && rng.bernoulli(0.5)) {
            const int a = static_cast<int>(rng.uniform_int(0, static_cast<int>(room_rects.size()) - 1));
            const int b = static_cast<int>(rng.uniform_int(0, static_cast<int>(room_rects.size()) - 1));
            if (a != b) carve_connection(free, room_rects[a], room_rects[b], corridor_c, door_c, rng);
        }

        SemanticGrid grid(W, H, res);
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                grid.at(x, y).occupancy = free.at(x, y) ? Occupancy::Free : Occupancy::Wall;

        const auto main_mask = grid.main_component_mask();
        if (grid.free_fraction_in(main_mask) < 0.95) continue;
        return grid;
    }
    throw GenerationFailure("floorplan generation failed after " +
                            std::to_string(config.max_attempts) + " attempts (seed " +
                            std::to_string(seed) + ")");
}

namespace {

std::vector<Cell> admissible_cells(const SemanticGrid& grid, double clearance) {
    const InflatedGrid inflated = inflate(grid, clearance);
    const auto main_mask = grid.main_component_mask();
    std::vector<Cell> cells;
    for (int y = 0; y < grid.height(); ++y)
        for (int x = 0; x < grid.width(); ++x)
            if (main_mask.at(x, y) && !inflated.blocked({x, y})) cells.push_back({x, y});
    return cells;
}

}  // namespace

std::vector<ObjectPlacement> spawn_objects(const SemanticGrid& grid, int k, uint64_t seed) {
    if (k < 1 || k > 6) throw InfeasibleSpawn("object count must be in [1, 6]");
    Rng rng(seed);

    // Sub-cell jitter stays within the admissibility margin of one cell.
    const double clearance = 0.5 + grid.resolution();
    const std::vector<Cell> cells = admissible_cells(grid, clearance);
    if (static_cast<int>(cells.size()) < k)
        throw InfeasibleSpawn("admissible region too small for " + std::to_string(k) + " objects");

    std::vector<int> classes(kNumClasses);
    std::iota(classes.begin(), classes.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = static_cast<int>(rng.uniform_int(i, kNumClasses - 1));
        std::swap(classes[i], classes[j]);
    }

    std::vector<ObjectPlacement> placed;
    for (int i = 0; i < k; ++i) {
        bool ok = false;
        for (int tries = 0; tries < 500 && !ok; ++tries) {
            const Cell c = cells[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(cells.size()) - 1))];
            Vec2 center = grid.cell_center(c);
            center.x += rng.uniform(-0.45, 0.45) * grid.resolution();
            center.y += rng.uniform(-0.45, 0.45) * grid.resolution();
            bool clash = false;
            for (const auto& p : placed)
                if ((p.center - center).norm() < 1.0) clash = true;
            if (clash) continue;
            placed.push_back({i, classes[i], center, kObjectRadius});
            ok = true;
        }
        if (!ok) throw InfeasibleSpawn("could not place object " + std::to_string(i) +
                                       " with 1.0 m separation (seed " + std::to_string(seed) + ")");
    }
    return placed;
}

namespace {

EpisodeSpec assemble_episode(SemanticGrid grid, uint64_t seed, int k, uint64_t spawn_seed,
                             uint64_t start_seed) {
    const auto placements = spawn_objects(grid, k, spawn_seed);
    for (const auto& p : placements) grid.add_object(p);

    EpisodeSpec spec;
    spec.seed = seed;
    spec.k = k;
    spec.grid = std::move(grid);
    spec.goal_vector.assign(kNumClasses, 0);
    for (const auto& p : placements) spec.goal_vector[static_cast<size_t>(p.class_id)] = 1;

    Rng rng(start_seed);
    const std::vector<Cell> start_cells = admissible_cells(spec.grid, kStartClearance);
    if (start_cells.empty()) throw InfeasibleSpawn("no admissible start cells");
    const Cell c = start_cells[static_cast<size_t>(
        rng.uniform_int(0, static_cast<int>(start_cells.size()) - 1))];
    const Vec2 pos = spec.grid.cell_center(c);
    spec.start_pose = {pos.x + rng.uniform(-0.3, 0.3) * spec.grid.resolution(),
                       pos.y + rng.uniform(-0.3, 0.3) * spec.grid.resolution(),
                       rng.uniform(-kPi, kPi)};

    // Reachability of every object on the inflated grid.
    const SearchOracle oracle(spec);
    for (const auto& p : spec.objects())
        if (oracle.geodesic_to(p.instance_id, spec.start_pose) == kInf)
            throw InfeasibleSpawn("object unreachable from start");
    return spec;
}

}  // namespace

EpisodeSpec make_episode(uint64_t seed, int k, const GenConfig& config) {
    Rng rng(seed);
    std::string last_error = "none";
    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
        const uint64_t grid_seed = rng.next_u64();
        const uint64_t spawn_seed = rng.next_u64();
        const uint64_t start_seed = rng.next_u64();
        try {
            return assemble_episode(generate_floorplan(grid_seed, config), seed, k, spawn_seed,
                                    start_seed);
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    throw GenerationFailure("episode generation failed (seed " + std::to_string(seed) +
                            "): " + last_error);
}

EpisodeSpec make_episode_on(const SemanticGrid& scene, uint64_t episode_seed, int k) {
    if (!scene.objects().empty())
        throw InfeasibleSpawn("scene grid already carries objects");
    Rng rng(episode_seed);
    std::string last_error = "none";
    for (int attempt = 0; attempt < 20; ++attempt) {
        const uint64_t spawn_seed = rng.next_u64();
        const uint64_t start_seed = rng.next_u64();
        try {
            return assemble_episode(scene, episode_seed, k, spawn_seed, start_seed);
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    throw GenerationFailure("episode generation on scene failed (seed " +
                            std::to_string(episode_seed) + "): " + last_error);
}

void save_floorplan(const SemanticGrid& grid, const std::filesystem::path& path) {
    nlohmann::json j;
    j["version"] = kFloorplanFormatVersion;
    j["resolution"] = grid.resolution();
    j["width"] = grid.width();
    j["height"] = grid.height();

    nlohmann::json rle = nlohmann::json::array();
    int run_value = -1;
    long run_len = 0;
    for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
            const int v = grid.at(x, y).occupancy == Occupancy::Wall ? 1 : 0;
            if (v == run_value) {
                ++run_len;
            } else {
                if (run_len > 0) rle.push_back({run_value, run_len});
                run_value = v;
                run_len = 1;
            }
        }
    }
    if (run_len > 0) rle.push_back({run_value, run_len});
    j["occupancy_rle"] = std::move(rle);

    nlohmann::json objs = nlohmann::json::array();
    for (const auto& o : grid.objects()) {
        objs.push_back({{"instance_id", o.instance_id},
                        {"class_id", o.class_id},
                        {"cx", o.center.x},
                        {"cy", o.center.y},
                        {"radius", o.footprint_radius}});
    }
    j["objects"] = std::move(objs);

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for write: " + path.string());
    out << j.dump();
    if (!out) throw IoError("write failed: " + path.string());
}

SemanticGrid load_floorplan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedFile("cannot open: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedFile(path.string() + ": " + e.what());
    }
    try {
        if (!j.contains("version")) throw MalformedFile(path.string() + ": missing version field");
        if (j.at("version").get<int>() != kFloorplanFormatVersion)
            throw VersionMismatch(path.string() + ": unsupported version " +
                                  j.at("version").dump());
        const int w = j.at("width").get<int>();
        const int h = j.at("height").get<int>();
        const double res = j.at("resolution").get<double>();
        if (w <= 0 || h <= 0 || res <= 0.0)
            throw MalformedFile(path.string() + ": non-positive dimensions");

        SemanticGrid grid(w, h, res);
        long idx = 0;
        const long total = static_cast<long>(w) * h;
        for (const auto& run : j.at("occupancy_rle")) {
            const int value = run.at(0).get<int>();
            const long count = run.at(1).get<long>();
            if (count <= 0 || (value != 0 && value != 1))
                throw MalformedFile(path.string() + ": bad RLE run at index " + std::to_string(idx));
            for (long i = 0; i < count; ++i, ++idx) {
                if (idx >= total)
                    throw MalformedFile(path.string() + ": RLE overruns grid");
                grid.at(static_cast<int>(idx % w), static_cast<int>(idx / w)).occupancy =
                    value ? Occupancy::Wall : Occupancy::Free;
            }
        }
        if (idx != total)
            throw MalformedFile(path.string() + ": RLE covers " + std::to_string(idx) + " of " +
                                std::to_string(total) + " cells");
        for (const auto& jo : j.at("objects")) {
            ObjectPlacement o;
            o.instance_id = jo.at("instance_id").get<int>();
            o.class_id = jo.at("class_id").get<int>();
            o.center = {jo.at("cx").get<double>(), jo.at("cy").get<double>()};
            o.footprint_radius = jo.at("radius").get<double>();
            grid.add_object(o);
        }
        return grid;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedFile(path.string() + ": " + e.what());
    }
}

}  // namespace mosearch
