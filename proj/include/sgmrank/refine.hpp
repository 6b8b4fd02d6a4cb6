#pragma once

#include <cstdint>
#include <vector>

#include "sgmrank/image.hpp"
#include "sgmrank/sgm.hpp"

namespace sgmrank {

/// Per-pixel disparity with validity flags. winner_take_all produces integral
/// values; subpixel refinement adds fractional offsets.
struct DisparityMap {
    int width = 0;
    int height = 0;
    std::vector<float> disp;
    std::vector<uint8_t> valid;

    DisparityMap() = default;
    DisparityMap(int w, int h)
        : width(w), height(h),
          disp(static_cast<size_t>(w) * h, 0.0f),
          valid(static_cast<size_t>(w) * h, 0) {}

    size_t index(int x, int y) const {
        return static_cast<size_t>(y) * width + x;
    }
    float at(int x, int y) const { return disp[index(x, y)]; }
    bool is_valid(int x, int y) const { return valid[index(x, y)] != 0; }
    double valid_fraction() const;
};

/// Disparity scaled to [0, 255] for display; invalid pixels render as 0.
struct RenderedMap {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> gray;

    RenderedMap() = default;
    RenderedMap(int w, int h)
        : width(w), height(h), gray(static_cast<size_t>(w) * h, 0) {}

    uint8_t at(int x, int y) const {
        return gray[static_cast<size_t>(y) * width + x];
    }
    GrayImage to_gray() const;
};

/// Validation check against a right-reference disparity derived from the same
/// left-reference aggregated volume: D_R(x, y) = argmin_d S(x+d, y, d).
/// Invalidates pixels whose left/right disparities differ by more than 1 or
/// whose right sample is unavailable. Never validates an invalid pixel.
DisparityMap left_right_check(const AggregatedVolume& agg,
                              const DisparityMap& left_disp);

/// Parabola fit through the aggregated costs at d-1, d, d+1; offset clamped
/// to [-0.5, 0.5]. Boundary winners and invalid pixels pass through.
DisparityMap subpixel(const AggregatedVolume& agg, const DisparityMap& disp);

/// gray = round(disp * 255 / (dmax - 1)) for valid pixels, 0 for invalid.
RenderedMap render(const DisparityMap& disp, int dmax);

/// Scanline interpolation: each invalid pixel takes the smaller of the
/// nearest valid disparities to its left and right (background preference).
DisparityMap fill_holes(const DisparityMap& disp);

/// 5x5 median with replicate-clamped neighborhoods (13th of 25 values).
RenderedMap median_5x5(const RenderedMap& img);

} // namespace sgmrank
