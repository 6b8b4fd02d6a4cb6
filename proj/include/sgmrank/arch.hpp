#pragma once

#include <cstdint>
#include <string>

#include "sgmrank/config.hpp"
#include "sgmrank/cost.hpp"
#include "sgmrank/image.hpp"
#include "sgmrank/refine.hpp"
#include "sgmrank/sgm.hpp"

namespace sgmrank {

/// Operating point of the parallel architecture.
struct ArchParams {
    int width = 450;
    int height = 375;
    int dmax = 64;
    double fps = 30.0;
    long long l_max = 65535; // path-cost ceiling; buffer entries are
                             // ceil(log2(l_max+1)) bits wide
    int lines_buffered = 9;
};

struct ArchReport {
    double f_max_mhz = 0.0;
    long long m_b_bits = 0;
    double m_b_kilobytes = 0.0;
    int cost_bits = 0;
    int lr_bits = 0;
    long long simulated_peak_occupancy = 0; // bits
    long long saturation_count = 0;
    int lines_buffered = 0;
};

/// Bits needed to store values in [0, v]: ceil(log2(v+1)), 0 for v = 0.
int value_bits(long long v);

/// f_max = 9 * f_s with f_s = W * H * fps active-pixel sampling rate.
double max_frequency_mhz(int width, int height, double fps);

/// Presentation rounding to 0.1 MHz.
double round_tenth(double mhz);

/// On-chip memory for path-cost buffering:
/// (D+5) * (3W+1) * ceil(log2(l_max+1)) bits.
long long memory_budget_bits(int dmax, int width, long long l_max);

struct BitWidths {
    int cost_bits = 0;
    int lr_bits = 0;
};

/// cost_bits covers [0, c_max]; lr_bits covers the path-cost bound
/// c_max + P2' implied by the recursion.
BitWidths bitwidth_plan(int c_max, const Penalties& pen);

struct StreamResult {
    DisparityMap disp;
    ArchReport report;
};

/// Runs the disparity-level streaming dataflow on an externally supplied cost
/// stream: per-direction single-line path-cost buffers, stored comparator-tree
/// minima, and saturating arithmetic at l_max. The left image drives the P2
/// gradient LUT. Output is bit-identical to aggregate + winner_take_all
/// whenever no saturation event occurred.
StreamResult streaming_run(const CostVolume& vol, const GrayImage& left,
                           const Penalties& pen, long long l_max,
                           double fps = 30.0);

/// Full streaming front end: the pair is consumed strictly in raster order
/// through two kernel-height line buffers, per-row rank comparison vectors
/// feed the matching-cost PEs, and the same Lr dataflow as streaming_run
/// produces the disparity stream. Requires a rank-family cost.
StreamResult streaming_pipeline(const GrayImage& left, const GrayImage& right,
                                const SgmConfig& cfg, double fps = 30.0);

} // namespace sgmrank
