#pragma once

#include <cmath>
#include <limits>

#include "mosearch/common.hpp"
#include "mosearch/grid.hpp"

namespace mosearch {

// Supercover DDA over a square grid. Visits cells in traversal order with the
// ray parameter at which each cell is entered; at exact corner crossings both
// side cells are visited (x side first) before the diagonal cell. The cell
// containing the origin is not visited. The visitor returns false to stop.
//
// Shared by the sensor and the map integrator so both walk identical cells.
template <typename Visitor>
void traverse_ray(Vec2 origin, Vec2 dir, double resolution, double max_t, Visitor&& visit) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    int cx = static_cast<int>(std::floor(origin.x / resolution));
    int cy = static_cast<int>(std::floor(origin.y / resolution));

    const int step_x = dir.x > 0 ? 1 : (dir.x < 0 ? -1 : 0);
    const int step_y = dir.y > 0 ? 1 : (dir.y < 0 ? -1 : 0);

    double t_max_x = inf, t_delta_x = inf;
    if (step_x > 0) {
        t_max_x = ((cx + 1) * resolution - origin.x) / dir.x;
        t_delta_x = resolution / dir.x;
    } else if (step_x < 0) {
        t_max_x = (cx * resolution - origin.x) / dir.x;
        t_delta_x = -resolution / dir.x;
    }
    double t_max_y = inf, t_delta_y = inf;
    if (step_y > 0) {
        t_max_y = ((cy + 1) * resolution - origin.y) / dir.y;
        t_delta_y = resolution / dir.y;
    } else if (step_y < 0) {
        t_max_y = (cy * resolution - origin.y) / dir.y;
        t_delta_y = -resolution / dir.y;
    }

    while (true) {
        if (t_max_x < t_max_y) {
            const double t = t_max_x;
            if (t > max_t) return;
            cx += step_x;
            t_max_x += t_delta_x;
            if (!visit(Cell{cx, cy}, t)) return;
        } else if (t_max_y < t_max_x) {
            const double t = t_max_y;
            if (t > max_t) return;
            cy += step_y;
            t_max_y += t_delta_y;
            if (!visit(Cell{cx, cy}, t)) return;
        } else {
            // Corner crossing (also covers the axis-aligned +inf == +inf case,
            // which cannot happen for a nonzero direction).
            const double t = t_max_x;
            if (t > max_t || t == inf) return;
            if (!visit(Cell{cx + step_x, cy}, t)) return;
            if (!visit(Cell{cx, cy + step_y}, t)) return;
            cx += step_x;
            cy += step_y;
            t_max_x += t_delta_x;
            t_max_y += t_delta_y;
            if (!visit(Cell{cx, cy}, t)) return;
        }
    }
}

}  // namespace mosearch
