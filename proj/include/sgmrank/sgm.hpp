#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sgmrank/cost.hpp"
#include "sgmrank/image.hpp"

namespace sgmrank {

/// Path-cost penalties. The effective discontinuity penalty is derived from
/// p2_base per pixel and direction (see adaptive_p2) and never drops below p1.
struct Penalties {
    int p1 = 0;
    int p2_base = 0;

    void validate() const; // p1 >= 0, p2_base >= p1
};

/// Predecessor offsets of the four causal 1-D paths (0, 45, 90, 135 degrees).
/// All point into the half-plane already visited by a raster scan.
struct PathSet {
    static constexpr std::array<std::array<int, 2>, 4> offsets{
        {{-1, 0}, {-1, -1}, {0, -1}, {+1, -1}}};
};

/// S(p, d) = sum of the four directional path costs.
struct AggregatedVolume {
    int width = 0;
    int height = 0;
    int dmax = 0;
    std::vector<int32_t> agg;

    AggregatedVolume() = default;
    AggregatedVolume(int w, int h, int d)
        : width(w), height(h), dmax(d),
          agg(static_cast<size_t>(w) * h * d, 0) {}

    size_t index(int x, int y, int d) const {
        return (static_cast<size_t>(y) * width + x) * dmax + d;
    }
    int32_t at(int x, int y, int d) const { return agg[index(x, y, d)]; }
    int32_t& at(int x, int y, int d) { return agg[index(x, y, d)]; }
};

/// Gradient-adaptive discontinuity penalty: p2_base at zero gradient,
/// otherwise max(p1, floor(p2_base / |i_p - i_prev|)).
int adaptive_p2(const Penalties& pen, uint8_t i_p, uint8_t i_prev);

/// One step of the path recursion for all d. Out-of-range d-1 / d+1 terms
/// are omitted from the inner minimum.
std::vector<int32_t> path_step(const std::vector<int32_t>& prev,
                               const std::vector<uint16_t>& c_pd,
                               const Penalties& pen, int p2_eff);

/// Path start: no predecessor, L_r(p, d) = C(p, d).
std::vector<int32_t> init_path(const std::vector<uint16_t>& c_p0);

/// Four-direction aggregation over a single raster scan per direction, with
/// the discontinuity penalty adapted to left-image gradients. Bit-identical
/// for any thread count.
AggregatedVolume aggregate(const CostVolume& vol, const GrayImage& left,
                           const Penalties& pen);

struct DisparityMap; // refine.hpp

/// argmin_d S(p, d), ties broken toward the smaller d. All pixels valid.
DisparityMap winner_take_all(const AggregatedVolume& agg);

} // namespace sgmrank
