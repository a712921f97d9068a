#include "mosearch/semantic_grid.hpp"

#include <deque>

namespace mosearch {

Grid<uint8_t> SemanticGrid::main_component_mask() const {
    const int w = width(), h = height();
    Grid<int> label(w, h, -1);
    int best_label = -1;
    int best_size = 0;
    int next_label = 0;
    std::deque<Cell> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (at(x, y).occupancy != Occupancy::Free || label.at(x, y) >= 0) continue;
            int size = 0;
            label.at(x, y) = next_label;
            queue.push_back({x, y});
            while (!queue.empty()) {
                Cell c = queue.front();
                queue.pop_front();
                ++size;
                constexpr int dx[] = {1, -1, 0, 0};
                constexpr int dy[] = {0, 0, 1, -1};
                for (int i = 0; i < 4; ++i) {
                    Cell n{c.x + dx[i], c.y + dy[i]};
                    if (!in_bounds(n) || label.at(n) >= 0) continue;
                    if (at(n).occupancy != Occupancy::Free) continue;
                    label.at(n) = next_label;
                    queue.push_back(n);
                }
            }
            if (size > best_size) {
                best_size = size;
                best_label = next_label;
            }
            ++next_label;
        }
    }
    Grid<uint8_t> mask(w, h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (label.at(x, y) == best_label) mask.at(x, y) = 1;
    return mask;
}

double SemanticGrid::free_fraction_in(const Grid<uint8_t>& mask) const {
    long free_total = 0, in_mask = 0;
    for (int y = 0; y < height(); ++y) {
        for (int x = 0; x < width(); ++x) {
            if (at(x, y).occupancy != Occupancy::Free) continue;
            ++free_total;
            if (mask.at(x, y)) ++in_mask;
        }
    }
    return free_total == 0 ? 0.0 : static_cast<double>(in_mask) / free_total;
}

}  // namespace mosearch
