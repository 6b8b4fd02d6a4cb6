#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sgmrank {

/// Rectified 8-bit grayscale raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, uint8_t fill = 0)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    uint8_t at(int x, int y) const {
        return data[static_cast<size_t>(y) * width + x];
    }
    uint8_t& at(int x, int y) {
        return data[static_cast<size_t>(y) * width + x];
    }
    // Replicate-padded access; never out of bounds.
    uint8_t at_clamped(int x, int y) const {
        if (x < 0) x = 0;
        if (x >= width) x = width - 1;
        if (y < 0) y = 0;
        if (y >= height) y = height - 1;
        return data[static_cast<size_t>(y) * width + x];
    }
    size_t size() const { return data.size(); }
    bool same_size(const GrayImage& o) const {
        return width == o.width && height == o.height;
    }
};

/// Per-pixel ground-truth disparity. Raw value 0 in the source raster marks
/// an unknown pixel; known pixels carry raw / scale_divisor.
struct GroundTruthMap {
    int width = 0;
    int height = 0;
    std::vector<float> disparity;
    std::vector<uint8_t> known_mask;

    float at(int x, int y) const {
        return disparity[static_cast<size_t>(y) * width + x];
    }
    bool known(int x, int y) const {
        return known_mask[static_cast<size_t>(y) * width + x] != 0;
    }
};

/// Loads a PGM (P2/P5) or PPM (P3/P6) file with maxval 255. Color input is
/// converted via luma = round(0.299R + 0.587G + 0.114B).
GrayImage load_gray(const std::string& path);

/// Loads a PGM disparity raster; raw 0 = unknown, otherwise raw / scale_divisor.
GroundTruthMap load_ground_truth(const std::string& path, double scale_divisor);

/// Writes binary P5, maxval 255. load_gray(save_gray(x)) == x.
void save_gray(const GrayImage& img, const std::string& path);

/// Hard error (throws) unless left and right have identical dimensions.
void validate_pair(const GrayImage& left, const GrayImage& right);

} // namespace sgmrank
