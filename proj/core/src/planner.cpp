#include "mosearch/planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace mosearch {

namespace {

// 8-connected neighborhood, fixed order: straight moves first.
constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

// Geodesic costs are tracked as (straight, diagonal) step counts. The metric
// value ns*res + nd*res*sqrt(2) is derived from the counts with one fixed
// expression, so A* and Dijkstra produce bit-identical costs for the same
// optimal step multiset (which is unique: sqrt(2) is irrational).
double metric(int straight, int diagonal, double res) {
    return straight * res + diagonal * (res * std::numbers::sqrt2);
}

}  // namespace

InflatedGrid::InflatedGrid(const Grid<uint8_t>& base, double resolution, double radius)
    : blocked_(base.width(), base.height(), 0), resolution_(resolution), radius_(radius) {
    const int rc_bound = static_cast<int>(std::floor(radius / resolution));
    const double rc2 = (radius / resolution) * (radius / resolution);
    std::vector<Cell> disc;
    for (int dy = -rc_bound; dy <= rc_bound; ++dy)
        for (int dx = -rc_bound; dx <= rc_bound; ++dx)
            if (static_cast<double>(dx) * dx + static_cast<double>(dy) * dy <= rc2)
                disc.push_back({dx, dy});

    const int w = base.width(), h = base.height();
    auto is_wall = [&](int x, int y) { return !base.in_bounds(x, y) || base.at(x, y) != 0; };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!base.at(x, y)) continue;
            blocked_.at(x, y) = 1;
            // Only boundary wall cells can extend the dilation.
            bool boundary = false;
            for (int dy = -1; dy <= 1 && !boundary; ++dy)
                for (int dx = -1; dx <= 1 && !boundary; ++dx)
                    if (!is_wall(x + dx, y + dy)) boundary = true;
            if (!boundary) continue;
            for (Cell d : disc) {
                const int nx = x + d.x, ny = y + d.y;
                if (blocked_.in_bounds(nx, ny)) blocked_.at(nx, ny) = 1;
            }
        }
    }
}

InflatedGrid inflate(const SemanticGrid& grid, double radius) {
    Grid<uint8_t> walls(grid.width(), grid.height(), 0);
    for (int y = 0; y < grid.height(); ++y)
        for (int x = 0; x < grid.width(); ++x)
            if (grid.at(x, y).occupancy == Occupancy::Wall) walls.at(x, y) = 1;
    return InflatedGrid(walls, grid.resolution(), radius);
}

double octile_distance(Cell a, Cell b, double resolution) {
    const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
    const int lo = std::min(dx, dy), hi = std::max(dx, dy);
    return metric(hi - lo, lo, resolution);
}

std::optional<Path> astar(const Grid<uint8_t>& blocked, double resolution, Cell start, Cell goal) {
    if (!blocked.in_bounds(start) || blocked.at(start) != 0) return std::nullopt;
    if (!blocked.in_bounds(goal) || blocked.at(goal) != 0) return std::nullopt;

    const int w = blocked.width(), h = blocked.height();
    struct Node {
        double f;
        uint64_t order;
        int idx;
        bool operator>(const Node& o) const { return f > o.f || (f == o.f && order > o.order); }
    };
    std::vector<std::pair<int32_t, int32_t>> g(static_cast<size_t>(w) * h, {0, 0});
    std::vector<double> g_val(static_cast<size_t>(w) * h, kInf);
    std::vector<int> parent(static_cast<size_t>(w) * h, -1);
    std::priority_queue<Node, std::vector<Node>, std::greater<>> open;

    auto idx_of = [w](Cell c) { return c.y * w + c.x; };
    const int start_idx = idx_of(start), goal_idx = idx_of(goal);
    g_val[start_idx] = 0.0;
    uint64_t order = 0;
    open.push({octile_distance(start, goal, resolution), order++, start_idx});

    while (!open.empty()) {
        const Node node = open.top();
        open.pop();
        const int ci = node.idx;
        const Cell c{ci % w, ci / w};
        if (node.f > g_val[ci] + octile_distance(c, goal, resolution)) continue;  // stale entry
        if (ci == goal_idx) break;
        for (int n = 0; n < 8; ++n) {
            const Cell nb{c.x + kDx[n], c.y + kDy[n]};
            if (!blocked.in_bounds(nb) || blocked.at(nb) != 0) continue;
            auto cand = g[ci];
            if (n < 4)
                ++cand.first;
            else
                ++cand.second;
            const double cand_val = metric(cand.first, cand.second, resolution);
            const int ni = idx_of(nb);
            if (cand_val < g_val[ni]) {
                g[ni] = cand;
                g_val[ni] = cand_val;
                parent[ni] = ci;
                open.push({cand_val + octile_distance(nb, goal, resolution), order++, ni});
            }
        }
    }
    if (g_val[goal_idx] == kInf) return std::nullopt;

    Path path;
    path.cost = g_val[goal_idx];
    for (int i = goal_idx; i != -1; i = parent[i]) path.cells.push_back({i % w, i / w});
    std::reverse(path.cells.begin(), path.cells.end());
    path.resolution = resolution;
    return path;
}

DistanceField DistanceField::compute(const Grid<uint8_t>& blocked, double resolution, Cell source) {
    DistanceField field;
    field.source_ = source;
    field.resolution_ = resolution;
    const int w = blocked.width(), h = blocked.height();
    field.steps_ = Grid<StepPair>(w, h, StepPair{-1, -1});
    if (!blocked.in_bounds(source) || blocked.at(source) != 0) return field;

    struct Node {
        double d;
        uint64_t order;
        int idx;
        bool operator>(const Node& o) const { return d > o.d || (d == o.d && order > o.order); }
    };
    std::vector<double> best(static_cast<size_t>(w) * h, kInf);
    std::priority_queue<Node, std::vector<Node>, std::greater<>> open;
    auto idx_of = [w](Cell c) { return c.y * w + c.x; };

    best[idx_of(source)] = 0.0;
    field.steps_.at(source) = {0, 0};
    uint64_t order = 0;
    open.push({0.0, order++, idx_of(source)});
    while (!open.empty()) {
        const Node node = open.top();
        open.pop();
        if (node.d > best[node.idx]) continue;
        const Cell c{node.idx % w, node.idx / w};
        const StepPair sc = field.steps_.at(c);
        for (int n = 0; n < 8; ++n) {
            const Cell nb{c.x + kDx[n], c.y + kDy[n]};
            if (!blocked.in_bounds(nb) || blocked.at(nb) != 0) continue;
            StepPair cand = sc;
            if (n < 4)
                ++cand.straight;
            else
                ++cand.diagonal;
            const double cand_val = metric(cand.straight, cand.diagonal, resolution);
            const int ni = idx_of(nb);
            if (cand_val < best[ni]) {
                best[ni] = cand_val;
                field.steps_.at(nb) = cand;
                open.push({cand_val, order++, ni});
            }
        }
    }
    return field;
}

double DistanceField::at(Cell c) const {
    if (!steps_.in_bounds(c)) return kInf;
    const StepPair s = steps_.at(c);
    if (s.straight < 0) return kInf;
    return metric({s.straight, s.diagonal}, resolution_);
}

std::optional<Path> DistanceField::path_from(Cell from) const {
    if (!reachable(from)) return std::nullopt;
    Path path;
    path.resolution = resolution_;
    path.cost = at(from);
    Cell cur = from;
    path.cells.push_back(cur);
    while (!(cur == source_)) {
        const StepPair sc = steps_.at(cur);
        Cell next = cur;
        bool found = false;
        for (int n = 0; n < 8 && !found; ++n) {
            const Cell nb{cur.x + kDx[n], cur.y + kDy[n]};
            if (!steps_.in_bounds(nb)) continue;
            const StepPair sn = steps_.at(nb);
            if (sn.straight < 0) continue;
            const StepPair want{n < 4 ? sc.straight - 1 : sc.straight,
                                n < 4 ? sc.diagonal : sc.diagonal - 1};
            if (sn == want) {
                next = nb;
                found = true;
            }
        }
        if (!found) return std::nullopt;  // corrupted field
        cur = next;
        path.cells.push_back(cur);
    }
    return path;
}

AngleLabel waypoint_and_angle(const Path& path, Pose pose) {
    double arc = 0.0;
    size_t pick = path.cells.empty() ? 0 : path.cells.size() - 1;
    for (size_t i = 1; i < path.cells.size(); ++i) {
        const Cell a = path.cells[i - 1], b = path.cells[i];
        const bool diag = a.x != b.x && a.y != b.y;
        arc += diag ? path.resolution * std::numbers::sqrt2 : path.resolution;
        if (arc >= kWaypointArcMin) {
            pick = i;
            break;
        }
    }
    if (path.cells.empty()) return AngleLabel::from_angle(0.0);
    const Cell wp = path.cells[pick];
    const Vec2 target{(wp.x + 0.5) * path.resolution, (wp.y + 0.5) * path.resolution};
    const double world = std::atan2(target.y - pose.y, target.x - pose.x);
    return AngleLabel::from_angle(world - pose.theta);
}

SearchOracle::SearchOracle(const EpisodeSpec& episode, double inflation_radius)
    : episode_(&episode), inflated_(inflate(episode.grid, inflation_radius)) {
    fields_.reserve(episode.objects().size());
    for (const auto& obj : episode.objects()) {
        fields_.push_back(DistanceField::compute(inflated_.blocked_grid(), inflated_.resolution(),
                                                 episode.grid.cell_of(obj.center)));
    }
}

Cell SearchOracle::plan_cell(Pose pose) const {
    const Cell c = episode_->grid.cell_of(pose.position());
    if (!inflated_.blocked(c)) return c;
    // The robot hugs walls closer than the inflation radius; snap to the
    // nearest plannable cell with a deterministic ring scan.
    for (int r = 1; r <= 15; ++r) {
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
                const Cell n{c.x + dx, c.y + dy};
                if (!inflated_.blocked(n)) return n;
            }
        }
    }
    return c;
}

double SearchOracle::geodesic_to(int instance_id, Pose pose) const {
    return fields_[static_cast<size_t>(instance_id)].at(plan_cell(pose));
}

std::pair<int, double> SearchOracle::closest_target(Pose pose,
                                                    const std::vector<int>& unfound) const {
    const Cell c = plan_cell(pose);
    int best = kNoInstance;
    double best_d = kInf;
    for (int id : unfound) {
        const double d = fields_[static_cast<size_t>(id)].at(c);
        if (d < best_d) {
            best_d = d;
            best = id;
        }
    }
    if (best == kNoInstance)
        throw NoReachableTarget("no reachable unfound target from (" + std::to_string(pose.x) +
                                ", " + std::to_string(pose.y) + ")");
    return {best, best_d};
}

AngleLabel SearchOracle::direction_label(Pose pose, const std::vector<int>& unfound) const {
    const auto [instance, dist] = closest_target(pose, unfound);
    const auto path = fields_[static_cast<size_t>(instance)].path_from(plan_cell(pose));
    if (!path) throw NoReachableTarget("no path to closest target");
    return waypoint_and_angle(*path, pose);
}

std::optional<Path> SearchOracle::path_to(int instance_id, Pose pose) const {
    return fields_[static_cast<size_t>(instance_id)].path_from(plan_cell(pose));
}

namespace {

double walk_leg(const Path& path, Vec2 target_center, double found_radius, double resolution,
                Cell* end_cell) {
    double arc = 0.0;
    for (size_t i = 0; i < path.cells.size(); ++i) {
        if (i > 0) {
            const Cell a = path.cells[i - 1], b = path.cells[i];
            const bool diag = a.x != b.x && a.y != b.y;
            arc += diag ? resolution * std::numbers::sqrt2 : resolution;
        }
        const Cell c = path.cells[i];
        const Vec2 p{(c.x + 0.5) * resolution, (c.y + 0.5) * resolution};
        if ((p - target_center).norm() <= found_radius) {
            *end_cell = c;
            return arc;
        }
    }
    *end_cell = path.cells.back();
    return arc;
}

}  // namespace

double greedy_reference_length(const SearchOracle& oracle) {
    const EpisodeSpec& ep = oracle.episode();
    const double res = ep.grid.resolution();
    std::vector<int> unfound;
    for (const auto& o : ep.objects()) unfound.push_back(o.instance_id);

    Cell cur = oracle.plan_cell(ep.start_pose);
    double total = 0.0;
    while (!unfound.empty()) {
        const Pose cur_pose{(cur.x + 0.5) * res, (cur.y + 0.5) * res, 0.0};
        const auto [target, dist] = oracle.closest_target(cur_pose, unfound);
        const auto path = oracle.path_to(target, cur_pose);
        if (!path) throw NoReachableTarget("greedy reference: unreachable target");
        Cell end{};
        total += walk_leg(*path, ep.objects()[static_cast<size_t>(target)].center, kFoundRadius,
                          res, &end);
        cur = end;
        std::erase(unfound, target);
    }
    return total;
}

double greedy_reference_length(const EpisodeSpec& episode, double inflation_radius) {
    return greedy_reference_length(SearchOracle(episode, inflation_radius));
}

double held_karp_reference_length(const EpisodeSpec& episode, double inflation_radius) {
    const SearchOracle oracle(episode, inflation_radius);
    const auto& objects = episode.objects();
    const int k = static_cast<int>(objects.size());
    const double res = episode.grid.resolution();

    // Per-object geodesic tail bound: the farthest (geodesically) reachable
    // cell that still lies inside the found radius. Legs truncated by these
    // bounds lower-bound any tour that stops at the found boundary.
    std::vector<double> tail(static_cast<size_t>(k), 0.0);
    std::vector<Cell> centers;
    for (int i = 0; i < k; ++i) {
        const Vec2 c = objects[static_cast<size_t>(i)].center;
        centers.push_back(episode.grid.cell_of(c));
        const int span = static_cast<int>(std::ceil(kFoundRadius / res)) + 1;
        const Cell cc = centers.back();
        double worst = 0.0;
        for (int dy = -span; dy <= span; ++dy) {
            for (int dx = -span; dx <= span; ++dx) {
                const Cell cell{cc.x + dx, cc.y + dy};
                const Vec2 p{(cell.x + 0.5) * res, (cell.y + 0.5) * res};
                if ((p - c).norm() > kFoundRadius) continue;
                const Pose pose{p.x, p.y, 0.0};
                const double d = episode.grid.in_bounds(cell)
                                     ? oracle.geodesic_to(i, Pose{p.x, p.y, 0.0})
                                     : kInf;
                (void)pose;
                if (d < kInf && d > worst) worst = d;
            }
        }
        tail[static_cast<size_t>(i)] = worst;
    }

    auto leg = [&](double geo, double t_from, double t_to) {
        return std::max(0.0, geo - t_from - t_to);
    };
    std::vector<std::vector<double>> between(static_cast<size_t>(k),
                                             std::vector<double>(static_cast<size_t>(k), 0.0));
    std::vector<double> from_start(static_cast<size_t>(k), 0.0);
    for (int j = 0; j < k; ++j) {
        const Vec2 cj = objects[static_cast<size_t>(j)].center;
        from_start[static_cast<size_t>(j)] =
            leg(oracle.geodesic_to(j, episode.start_pose), 0.0, tail[static_cast<size_t>(j)]);
        for (int i = 0; i < k; ++i) {
            if (i == j) continue;
            const Vec2 ci = objects[static_cast<size_t>(i)].center;
            const double geo = oracle.geodesic_to(j, Pose{ci.x, ci.y, 0.0});
            between[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                leg(geo, tail[static_cast<size_t>(i)], tail[static_cast<size_t>(j)]);
        }
    }

    const int full = (1 << k) - 1;
    std::vector<std::vector<double>> dp(static_cast<size_t>(1 << k),
                                        std::vector<double>(static_cast<size_t>(k), kInf));
    for (int j = 0; j < k; ++j)
        dp[static_cast<size_t>(1 << j)][static_cast<size_t>(j)] = from_start[static_cast<size_t>(j)];
    for (int mask = 1; mask <= full; ++mask) {
        for (int last = 0; last < k; ++last) {
            if (!(mask & (1 << last))) continue;
            const double cur = dp[static_cast<size_t>(mask)][static_cast<size_t>(last)];
            if (cur == kInf) continue;
            for (int next = 0; next < k; ++next) {
                if (mask & (1 << next)) continue;
                const int nm = mask | (1 << next);
                const double cand =
                    cur + between[static_cast<size_t>(last)][static_cast<size_t>(next)];
                if (cand < dp[static_cast<size_t>(nm)][static_cast<size_t>(next)])
                    dp[static_cast<size_t>(nm)][static_cast<size_t>(next)] = cand;
            }
        }
    }
    double best = kInf;
    for (int j = 0; j < k; ++j) best = std::min(best, dp[static_cast<size_t>(full)][static_cast<size_t>(j)]);
    return best;
}

}  // namespace mosearch
