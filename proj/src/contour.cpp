#include "featurex/contour.hpp"

#include <algorithm>
#include <unordered_map>

namespace featurex {

namespace {

// Moore neighborhood in cyclic order. Consecutive ring positions are
// 4-adjacent to each other, which guarantees every traced pixel has a
// 4-neighbor outside the cloud (the backtrack position).
constexpr int kRing[8][2] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1},
                             {1, 0},  {1, 1},   {0, 1},  {-1, 1}};

struct Grid {
    int w = 0, h = 0;
    int x0 = 0, y0 = 0;
    std::vector<uint8_t> cells;

    bool at(int gx, int gy) const {
        if (gx < 0 || gx >= w || gy < 0 || gy >= h) return false;
        return cells[static_cast<size_t>(gy) * w + gx] != 0;
    }
    void set(int gx, int gy, uint8_t v) { cells[static_cast<size_t>(gy) * w + gx] = v; }
};

// Flood-fills 8-connected components and keeps only the largest (first found
// on ties, scanning row-major).
void keep_largest_component(Grid& g) {
    std::vector<int> comp(g.cells.size(), 0);
    int next = 0;
    int best = 0;
    size_t best_size = 0;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < g.h; ++y) {
        for (int x = 0; x < g.w; ++x) {
            if (!g.at(x, y) || comp[static_cast<size_t>(y) * g.w + x] != 0) continue;
            ++next;
            size_t size = 0;
            stack.push_back({x, y});
            comp[static_cast<size_t>(y) * g.w + x] = next;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                ++size;
                for (const auto& d : kRing) {
                    const int nx = cx + d[0], ny = cy + d[1];
                    if (!g.at(nx, ny)) continue;
                    int& c = comp[static_cast<size_t>(ny) * g.w + nx];
                    if (c == 0) {
                        c = next;
                        stack.push_back({nx, ny});
                    }
                }
            }
            if (size > best_size) {
                best_size = size;
                best = next;
            }
        }
    }
    if (next <= 1) return;
    for (size_t i = 0; i < g.cells.size(); ++i)
        if (g.cells[i] && comp[i] != best) g.cells[i] = 0;
}

} // namespace

ContourPath trace_contour(const PixelCloud& cloud) {
    ContourPath path;
    if (cloud.pixels.empty()) return path;

    Grid g;
    g.x0 = static_cast<int>(cloud.bbox.x_min);
    g.y0 = static_cast<int>(cloud.bbox.y_min);
    g.w = cloud.bbox.width();
    g.h = cloud.bbox.height();
    g.cells.assign(static_cast<size_t>(g.w) * g.h, 0);
    for (const Pixel& p : cloud.pixels)
        g.set(static_cast<int>(p.x) - g.x0, static_cast<int>(p.y) - g.y0, 1);
    keep_largest_component(g);

    // Start pixel: row-major first pixel of the kept component. Its west
    // neighbor is guaranteed background.
    int sx = -1, sy = -1;
    for (int y = 0; y < g.h && sx < 0; ++y)
        for (int x = 0; x < g.w; ++x)
            if (g.at(x, y)) {
                sx = x;
                sy = y;
                break;
            }

    int cx = sx, cy = sy;
    int back = 0; // ring index of the backtrack position (initially west)

    // The walk is a deterministic map on (position, backtrack) states, so it
    // is eventually periodic. Record visit order and cut out exactly one
    // cycle; a transient prefix (possible when the loop re-enters the start
    // with a different backtrack) is dropped.
    std::unordered_map<uint64_t, size_t> seen;
    std::vector<PointI> walk;
    const size_t max_steps = 8 * g.cells.size() + 16;
    size_t cycle_start = 0;

    for (size_t step = 0; step < max_steps; ++step) {
        const uint64_t state = (static_cast<uint64_t>(static_cast<uint32_t>(cy)) << 35) |
                               (static_cast<uint64_t>(static_cast<uint32_t>(cx)) << 3) |
                               static_cast<uint64_t>(back);
        auto [it, inserted] = seen.insert({state, walk.size()});
        if (!inserted) {
            cycle_start = it->second;
            break;
        }
        walk.push_back({cx + g.x0, cy + g.y0});

        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int idx = (back + k) % 8;
            if (g.at(cx + kRing[idx][0], cy + kRing[idx][1])) {
                found = idx;
                break;
            }
        }
        if (found < 0) break; // isolated pixel

        // Backtrack becomes the (background) ring slot examined just before
        // the found neighbor, re-expressed relative to that neighbor.
        const int prev = (found + 7) % 8;
        const int bx = cx + kRing[prev][0];
        const int by = cy + kRing[prev][1];
        cx += kRing[found][0];
        cy += kRing[found][1];
        for (int k = 0; k < 8; ++k) {
            if (cx + kRing[k][0] == bx && cy + kRing[k][1] == by) {
                back = k;
                break;
            }
        }
    }
    path.points.assign(walk.begin() + static_cast<ptrdiff_t>(cycle_start), walk.end());
    return path;
}

} // namespace featurex
