#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgmrank/image.hpp"

namespace sgmrank {

enum class CostFunction { Sad, Bt, RankAd, RankSad, BlendSadRt, UnifiedRank };

const char* cost_function_name(CostFunction f);
CostFunction cost_function_from_name(const std::string& name);

/// Matching-cost selector. alpha weights the SAD/rank blend and is ignored
/// by every other variant.
struct CostKind {
    CostFunction variant = CostFunction::UnifiedRank;
    double alpha = 0.2;

    void validate() const; // alpha in [0,1]
};

/// Correlation window, rows x cols, both odd.
struct KernelSpec {
    int rows = 9;
    int cols = 9;

    int radius_y() const { return rows / 2; }
    int radius_x() const { return cols / 2; }
    int area() const { return rows * cols; }
    void validate() const;
};

/// W x H x D matching costs, (y, x, d) row-major.
struct CostVolume {
    int width = 0;
    int height = 0;
    int dmax = 0;
    std::vector<uint16_t> cost;

    CostVolume() = default;
    CostVolume(int w, int h, int d)
        : width(w), height(h), dmax(d),
          cost(static_cast<size_t>(w) * h * d, 0) {}

    size_t index(int x, int y, int d) const {
        return (static_cast<size_t>(y) * width + x) * dmax + d;
    }
    uint16_t at(int x, int y, int d) const { return cost[index(x, y, d)]; }
    uint16_t& at(int x, int y, int d) { return cost[index(x, y, d)]; }
    uint16_t max_value() const;
};

/// Number of window neighbors strictly darker than the center. Window samples
/// are replicate-clamped, so any center coordinate is legal (centers left of
/// the image arise from disparity shifts).
int rank_transform(const GrayImage& img, int px, int py, const KernelSpec& kernel);

/// Per-neighbor indicator stream T[I(q) < I(p)] in row-major window order.
/// rank_transform equals its population count.
std::vector<uint8_t> comparison_vector(const GrayImage& img, int px, int py,
                                       const KernelSpec& kernel);

/// |left_rank - right_rank|.
int cost_rank_ad(int left_rank, int right_rank);

/// SAD over indicator values: the count of positions where the bits differ.
int cost_rank_sad(const std::vector<uint8_t>& left_bits,
                  const std::vector<uint8_t>& right_bits);

/// cost_rank_ad of the popcounts plus cost_rank_sad of the bits.
int cost_unified(const std::vector<uint8_t>& left_bits,
                 const std::vector<uint8_t>& right_bits);

/// Window sum of |I_L(q) - I_R(q - d)| with replicate-clamped sampling.
int cost_sad(const GrayImage& left, const GrayImage& right, int px, int py,
             int d, const KernelSpec& kernel);

/// Symmetric sampling-insensitive dissimilarity between I_L(p) and
/// I_R(p - d) using half-pixel linear interpolants on each scanline;
/// the minimum of the two directional terms, floored at 0 and rounded.
int cost_bt(const GrayImage& left, const GrayImage& right, int px, int py, int d);

/// Fills C(p, d) for every pixel and every d in [0, dmax-1] for the selected
/// cost. Rank transforms are computed once per image and reused across d.
CostVolume build_cost_volume(const GrayImage& left, const GrayImage& right,
                             const CostKind& kind, const KernelSpec& kernel,
                             int dmax);

/// Conservative per-kind maximum cost, used for bit-width planning.
int max_cost_bound(const CostKind& kind, const KernelSpec& kernel);

/// "COSTVOL W H D" header line, then little-endian u16 in (y, x, d) order.
/// Values above 65535 are clamped on write (dump interface only).
void write_cost_volume_u16(const CostVolume& vol, const std::string& path);
CostVolume read_cost_volume_u16(const std::string& path);

} // namespace sgmrank
