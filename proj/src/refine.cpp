#include "sgmrank/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sgmrank {

double DisparityMap::valid_fraction() const {
    if (valid.empty()) return 0.0;
    size_t n = 0;
    for (uint8_t v : valid) n += v != 0;
    return static_cast<double>(n) / static_cast<double>(valid.size());
}

GrayImage RenderedMap::to_gray() const {
    GrayImage img(width, height);
    img.data = gray;
    return img;
}

DisparityMap left_right_check(const AggregatedVolume& agg,
                              const DisparityMap& left_disp) {
    const int W = agg.width, H = agg.height, D = agg.dmax;
    // Right-reference disparity from the same volume: the cost of matching
    // right pixel (x, y) at disparity d sits at S(x+d, y, d).
    std::vector<int> right_disp(static_cast<size_t>(W) * H, 0);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            int best_d = 0;
            int32_t best = std::numeric_limits<int32_t>::max();
            for (int d = 0; d < D && x + d < W; ++d) {
                const int32_t s = agg.at(x + d, y, d);
                if (s < best) {
                    best = s;
                    best_d = d;
                }
            }
            right_disp[static_cast<size_t>(y) * W + x] = best_d;
        }
    }

    DisparityMap out = left_disp;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const size_t i = out.index(x, y);
            if (!out.valid[i]) continue;
            const int dl = static_cast<int>(std::lround(out.disp[i]));
            const int xr = x - dl;
            if (xr < 0 ||
                std::abs(dl - right_disp[static_cast<size_t>(y) * W + xr]) > 1)
                out.valid[i] = 0;
        }
    }
    return out;
}

DisparityMap subpixel(const AggregatedVolume& agg, const DisparityMap& disp) {
    DisparityMap out = disp;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < agg.height; ++y) {
        for (int x = 0; x < agg.width; ++x) {
            const size_t i = out.index(x, y);
            if (!out.valid[i]) continue;
            const int d = static_cast<int>(std::lround(out.disp[i]));
            if (d <= 0 || d >= agg.dmax - 1) continue;
            const double a = agg.at(x, y, d - 1);
            const double b = agg.at(x, y, d);
            const double c = agg.at(x, y, d + 1);
            const double denom = a - 2.0 * b + c;
            if (denom == 0.0) continue;
            const double offset =
                std::clamp((a - c) / (2.0 * denom), -0.5, 0.5);
            out.disp[i] = static_cast<float>(d + offset);
        }
    }
    return out;
}

RenderedMap render(const DisparityMap& disp, int dmax) {
    if (dmax < 2)
        throw std::runtime_error("render requires dmax >= 2");
    RenderedMap out(disp.width, disp.height);
    const double scale = 255.0 / (dmax - 1);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < disp.height; ++y) {
        for (int x = 0; x < disp.width; ++x) {
            const size_t i = disp.index(x, y);
            if (!disp.valid[i]) continue;
            const long g = std::lround(disp.disp[i] * scale);
            out.gray[i] = static_cast<uint8_t>(std::clamp(g, 0L, 255L));
        }
    }
    return out;
}

DisparityMap fill_holes(const DisparityMap& disp) {
    DisparityMap out = disp;
    const int W = disp.width, H = disp.height;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < H; ++y) {
        const size_t row = static_cast<size_t>(y) * W;
        // Nearest valid disparity to the left of each pixel, then to the right.
        std::vector<float> left_val(W), right_val(W);
        std::vector<uint8_t> left_ok(W, 0), right_ok(W, 0);
        float v = 0.0f;
        bool ok = false;
        for (int x = 0; x < W; ++x) {
            if (disp.valid[row + x]) {
                v = disp.disp[row + x];
                ok = true;
            }
            left_val[x] = v;
            left_ok[x] = ok;
        }
        ok = false;
        for (int x = W - 1; x >= 0; --x) {
            if (disp.valid[row + x]) {
                v = disp.disp[row + x];
                ok = true;
            }
            right_val[x] = v;
            right_ok[x] = ok;
        }
        for (int x = 0; x < W; ++x) {
            if (disp.valid[row + x]) continue;
            if (left_ok[x] && right_ok[x]) {
                out.disp[row + x] = std::min(left_val[x], right_val[x]);
                out.valid[row + x] = 1;
            } else if (left_ok[x] || right_ok[x]) {
                out.disp[row + x] = left_ok[x] ? left_val[x] : right_val[x];
                out.valid[row + x] = 1;
            }
        }
    }
    return out;
}

RenderedMap median_5x5(const RenderedMap& img) {
    RenderedMap out(img.width, img.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height; ++y) {
        uint8_t window[25];
        for (int x = 0; x < img.width; ++x) {
            int n = 0;
            for (int oy = -2; oy <= 2; ++oy) {
                const int yy = std::clamp(y + oy, 0, img.height - 1);
                for (int ox = -2; ox <= 2; ++ox) {
                    const int xx = std::clamp(x + ox, 0, img.width - 1);
                    window[n++] = img.gray[static_cast<size_t>(yy) * img.width + xx];
                }
            }
            std::nth_element(window, window + 12, window + 25);
            out.gray[static_cast<size_t>(y) * img.width + x] = window[12];
        }
    }
    return out;
}

} // namespace sgmrank
