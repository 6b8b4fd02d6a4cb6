#include "sgmrank/sgm.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "sgmrank/refine.hpp"

namespace sgmrank {

void Penalties::validate() const {
    if (p1 < 0)
        throw std::runtime_error("P1 must be non-negative");
    if (p2_base < p1)
        throw std::runtime_error("P2' must be >= P1");
}

int adaptive_p2(const Penalties& pen, uint8_t i_p, uint8_t i_prev) {
    const int grad = std::abs(int(i_p) - int(i_prev));
    if (grad == 0)
        return pen.p2_base;
    return std::max(pen.p1, pen.p2_base / grad);
}

namespace {

// Eq.-1 step for all d: out[d] = C(p,d) + min{prev[d], prev[d-1]+P1,
// prev[d+1]+P1, min_prev+P2} - min_prev. Out-of-range neighbors omitted.
void path_step_into(const int32_t* prev, const uint16_t* cost, int dmax,
                    int p1, int p2_eff, int32_t* out) {
    int32_t min_prev = prev[0];
    for (int d = 1; d < dmax; ++d) min_prev = std::min(min_prev, prev[d]);
    const int32_t cap = min_prev + p2_eff;
    for (int d = 0; d < dmax; ++d) {
        int32_t best = std::min(prev[d], cap);
        if (d > 0) best = std::min(best, prev[d - 1] + p1);
        if (d + 1 < dmax) best = std::min(best, prev[d + 1] + p1);
        out[d] = cost[d] + best - min_prev;
    }
}

} // namespace

std::vector<int32_t> path_step(const std::vector<int32_t>& prev,
                               const std::vector<uint16_t>& c_pd,
                               const Penalties& pen, int p2_eff) {
    if (prev.size() != c_pd.size() || prev.empty())
        throw std::runtime_error("path_step: disparity count mismatch");
    std::vector<int32_t> out(prev.size());
    path_step_into(prev.data(), c_pd.data(), static_cast<int>(prev.size()),
                   pen.p1, p2_eff, out.data());
    return out;
}

std::vector<int32_t> init_path(const std::vector<uint16_t>& c_p0) {
    return std::vector<int32_t>(c_p0.begin(), c_p0.end());
}

AggregatedVolume aggregate(const CostVolume& vol, const GrayImage& left,
                           const Penalties& pen) {
    if (vol.width != left.width || vol.height != left.height)
        throw std::runtime_error("dimension mismatch: cost volume vs image");
    pen.validate();

    const int W = vol.width, H = vol.height, D = vol.dmax;
    AggregatedVolume sum(W, H, D);

    for (const auto& dir : PathSet::offsets) {
        const int pdx = dir[0], pdy = dir[1];
        if (pdy == 0) {
            // Horizontal path: rows are independent.
#pragma omp parallel for schedule(static)
            for (int y = 0; y < H; ++y) {
                std::vector<int32_t> row(static_cast<size_t>(W) * D);
                for (int x = 0; x < W; ++x) {
                    const uint16_t* c = &vol.cost[vol.index(x, y, 0)];
                    int32_t* out = &row[static_cast<size_t>(x) * D];
                    const int px = x + pdx;
                    if (px < 0 || px >= W) {
                        for (int d = 0; d < D; ++d) out[d] = c[d];
                    } else {
                        const int p2 = adaptive_p2(pen, left.at(x, y), left.at(px, y));
                        path_step_into(&row[static_cast<size_t>(px) * D], c, D,
                                       pen.p1, p2, out);
                    }
                    int32_t* s = &sum.agg[sum.index(x, y, 0)];
                    for (int d = 0; d < D; ++d) s[d] += out[d];
                }
            }
        } else {
            // Top-row predecessors: rows depend on the previous row only, so
            // each row parallelizes over columns.
            std::vector<int32_t> prev_row(static_cast<size_t>(W) * D);
            std::vector<int32_t> cur_row(static_cast<size_t>(W) * D);
            for (int y = 0; y < H; ++y) {
#pragma omp parallel for schedule(static)
                for (int x = 0; x < W; ++x) {
                    const uint16_t* c = &vol.cost[vol.index(x, y, 0)];
                    int32_t* out = &cur_row[static_cast<size_t>(x) * D];
                    const int px = x + pdx, py = y + pdy;
                    if (px < 0 || px >= W || py < 0) {
                        for (int d = 0; d < D; ++d) out[d] = c[d];
                    } else {
                        const int p2 = adaptive_p2(pen, left.at(x, y), left.at(px, py));
                        path_step_into(&prev_row[static_cast<size_t>(px) * D], c, D,
                                       pen.p1, p2, out);
                    }
                    int32_t* s = &sum.agg[sum.index(x, y, 0)];
                    for (int d = 0; d < D; ++d) s[d] += out[d];
                }
                std::swap(prev_row, cur_row);
            }
        }
    }
    return sum;
}

DisparityMap winner_take_all(const AggregatedVolume& agg) {
    DisparityMap disp(agg.width, agg.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < agg.height; ++y) {
        for (int x = 0; x < agg.width; ++x) {
            const int32_t* s = &agg.agg[agg.index(x, y, 0)];
            int best = 0;
            for (int d = 1; d < agg.dmax; ++d)
                if (s[d] < s[best]) best = d;
            disp.disp[disp.index(x, y)] = static_cast<float>(best);
            disp.valid[disp.index(x, y)] = 1;
        }
    }
    return disp;
}

} // namespace sgmrank
