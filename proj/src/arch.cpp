#include "sgmrank/arch.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sgmrank {

int value_bits(long long v) {
    if (v <= 0) return 0;
    return std::bit_width(static_cast<unsigned long long>(v));
}

double max_frequency_mhz(int width, int height, double fps) {
    return 9.0 * width * height * fps / 1e6;
}

double round_tenth(double mhz) {
    return std::round(mhz * 10.0) / 10.0;
}

long long memory_budget_bits(int dmax, int width, long long l_max) {
    return static_cast<long long>(dmax + 5) * (3LL * width + 1) * value_bits(l_max);
}

BitWidths bitwidth_plan(int c_max, const Penalties& pen) {
    BitWidths bw;
    bw.cost_bits = value_bits(c_max);
    bw.lr_bits = value_bits(static_cast<long long>(c_max) + pen.p2_base);
    return bw;
}

namespace {

// Sliding window of image rows fed strictly in raster order; each source row
// is copied in exactly once. Accesses outside the held window assert.
class LineBank {
  public:
    LineBank(const GrayImage& src, int lines)
        : src_(&src), lines_(std::max(1, lines)),
          buf_(static_cast<size_t>(std::max(1, lines)) * src.width) {}

    void advance(int center, int reach) {
        const int want = std::min(center + reach, src_->height - 1);
        while (last_ < want) {
            ++last_;
            std::memcpy(&buf_[static_cast<size_t>(last_ % lines_) * src_->width],
                        &src_->data[static_cast<size_t>(last_) * src_->width],
                        static_cast<size_t>(src_->width));
        }
    }

    uint8_t at(int x, int y) const {
        y = std::clamp(y, 0, src_->height - 1);
        x = std::clamp(x, 0, src_->width - 1);
        assert(y <= last_ && y > last_ - lines_);
        return buf_[static_cast<size_t>(y % lines_) * src_->width + x];
    }

    int lines() const { return lines_; }

  private:
    const GrayImage* src_;
    int lines_;
    std::vector<uint8_t> buf_;
    int last_ = -1;
};

// The Lr dataflow of the parallel architecture: one path-cost line per
// top-row direction plus the 0-degree recursion register file, stored
// comparator-tree minima, a 256-entry P2 LUT, and saturating stores.
class LrDataflow {
  public:
    LrDataflow(int width, int dmax, const Penalties& pen, long long l_max)
        : W_(width), D_(dmax), p1_(pen.p1), l_max_(l_max) {
        for (int g = 0; g < 256; ++g)
            p2_lut_[g] = adaptive_p2(pen, static_cast<uint8_t>(g), 0);
        for (auto& line : line_) line.assign(static_cast<size_t>(W_) * D_, 0);
        for (auto& line : cur_line_) line.assign(static_cast<size_t>(W_) * D_, 0);
        for (auto& m : line_min_) m.assign(W_, 0);
        for (auto& m : cur_line_min_) m.assign(W_, 0);
        for (auto& w : col_written_) w.assign(W_, 0);
        lr0_.assign(D_, 0);
        for (auto& o : out_) o.assign(D_, 0);
    }

    template <typename IntensityFn>
    void process_row(int y, const uint16_t* cost_row, IntensityFn&& intensity,
                     float* disp_row, uint8_t* valid_row) {
        for (int x = 0; x < W_; ++x) {
            const uint16_t* c = cost_row + static_cast<size_t>(x) * D_;
            const int i_p = intensity(x, y);

            // 0 degrees: predecessor is the previous pixel of this row.
            if (x == 0) {
                for (int d = 0; d < D_; ++d) out_[0][d] = c[d];
            } else {
                sub_pe(lr0_.data(), lr0_min_, c,
                       p2_lut_[std::abs(i_p - intensity(x - 1, y))], out_[0]);
            }
            // 45 degrees: (x-1, y-1).
            if (y == 0 || x == 0) {
                for (int d = 0; d < D_; ++d) out_[1][d] = c[d];
            } else {
                sub_pe(&line_[0][static_cast<size_t>(x - 1) * D_], line_min_[0][x - 1],
                       c, p2_lut_[std::abs(i_p - intensity(x - 1, y - 1))], out_[1]);
            }
            // 90 degrees: (x, y-1).
            if (y == 0) {
                for (int d = 0; d < D_; ++d) out_[2][d] = c[d];
            } else {
                sub_pe(&line_[1][static_cast<size_t>(x) * D_], line_min_[1][x], c,
                       p2_lut_[std::abs(i_p - intensity(x, y - 1))], out_[2]);
            }
            // 135 degrees: (x+1, y-1).
            if (y == 0 || x + 1 >= W_) {
                for (int d = 0; d < D_; ++d) out_[3][d] = c[d];
            } else {
                sub_pe(&line_[2][static_cast<size_t>(x + 1) * D_], line_min_[2][x + 1],
                       c, p2_lut_[std::abs(i_p - intensity(x + 1, y - 1))], out_[3]);
            }

            // Winner-take-all over the four-path sum, ties to the smaller d.
            int best_d = 0;
            long long best_s = std::numeric_limits<long long>::max();
            for (int d = 0; d < D_; ++d) {
                const long long s =
                    out_[0][d] + out_[1][d] + out_[2][d] + out_[3][d];
                if (s < best_s) {
                    best_s = s;
                    best_d = d;
                }
            }
            disp_row[x] = static_cast<float>(best_d);
            valid_row[x] = 1;

            // Commit saturated values and their comparator-tree minima.
            lr0_min_ = store(out_[0], lr0_.data());
            for (int dir = 0; dir < 3; ++dir) {
                cur_line_min_[dir][x] =
                    store(out_[dir + 1], &cur_line_[dir][static_cast<size_t>(x) * D_]);
            }
            if (!col_written_[0][x]) {
                for (int dir = 0; dir < 3; ++dir) col_written_[dir][x] = 1;
                // per direction: one D-deep column plus its stored minimum
                live_entries_ += 3LL * (D_ + 1);
                if (x == 0) live_entries_ += D_ + 1; // 0-degree registers + min
                peak_entries_ = std::max(peak_entries_, live_entries_);
            }
        }
        for (int dir = 0; dir < 3; ++dir) {
            std::swap(line_[dir], cur_line_[dir]);
            std::swap(line_min_[dir], cur_line_min_[dir]);
        }
    }

    long long saturation_count() const { return saturations_; }
    long long peak_occupancy_bits() const {
        return peak_entries_ * value_bits(l_max_);
    }

  private:
    // Eq.-6 data terms feeding one sub-PE per disparity.
    void sub_pe(const long long* prev, long long min_prev, const uint16_t* c,
                int p2_eff, std::vector<long long>& out) const {
        const long long l4 = min_prev + p2_eff;
        for (int d = 0; d < D_; ++d) {
            const long long l1 = prev[d];
            long long best = std::min(l1, l4);
            if (d > 0) best = std::min(best, prev[d - 1] + p1_); // L2
            if (d + 1 < D_) best = std::min(best, prev[d + 1] + p1_); // L3
            out[d] = c[d] + best - min_prev;
        }
    }

    long long store(const std::vector<long long>& raw, long long* dst) {
        long long m = std::numeric_limits<long long>::max();
        for (int d = 0; d < D_; ++d) {
            long long v = raw[d];
            if (v > l_max_) {
                v = l_max_;
                ++saturations_;
            }
            dst[d] = v;
            m = std::min(m, v);
        }
        return m;
    }

    int W_, D_, p1_;
    long long l_max_;
    int p2_lut_[256];
    std::vector<long long> line_[3], cur_line_[3]; // 45 / 90 / 135 degrees
    std::vector<long long> line_min_[3], cur_line_min_[3];
    std::vector<uint8_t> col_written_[3];
    std::vector<long long> lr0_;
    long long lr0_min_ = 0;
    std::vector<long long> out_[4];
    long long saturations_ = 0;
    long long live_entries_ = 0;
    long long peak_entries_ = 0;
};

// Packed per-row comparison vectors computed from a line bank; identical bit
// layout to the cost engine's precomputed rank fields.
struct RowRank {
    int x0 = 0;
    int words = 0;
    std::vector<uint64_t> bits;
    std::vector<uint16_t> pop;

    void build(const LineBank& bank, const KernelSpec& kernel, int width,
               int y, int first_center) {
        x0 = first_center;
        words = (kernel.area() + 63) / 64;
        const int span = width - x0;
        bits.assign(static_cast<size_t>(span) * words, 0);
        pop.assign(static_cast<size_t>(span), 0);
        const int ry = kernel.radius_y(), rx = kernel.radius_x();
        for (int cx = x0; cx < width; ++cx) {
            const uint8_t center = bank.at(cx, y);
            uint64_t* w = &bits[static_cast<size_t>(cx - x0) * words];
            int bit = 0, p = 0;
            for (int oy = -ry; oy <= ry; ++oy) {
                for (int ox = -rx; ox <= rx; ++ox, ++bit) {
                    if (bank.at(cx + ox, y + oy) < center) {
                        w[bit >> 6] |= uint64_t(1) << (bit & 63);
                        ++p;
                    }
                }
            }
            pop[static_cast<size_t>(cx - x0)] = static_cast<uint16_t>(p);
        }
    }

    const uint64_t* vec(int x) const {
        return &bits[static_cast<size_t>(x - x0) * words];
    }
    int rank(int x) const { return pop[static_cast<size_t>(x - x0)]; }
};

ArchReport base_report(int width, int height, int dmax, long long l_max,
                       double fps, const BitWidths& bw, int lines) {
    ArchReport r;
    r.f_max_mhz = max_frequency_mhz(width, height, fps);
    r.m_b_bits = memory_budget_bits(dmax, width, l_max);
    r.m_b_kilobytes = static_cast<double>(r.m_b_bits) / 8.0 / 1024.0;
    r.cost_bits = bw.cost_bits;
    r.lr_bits = bw.lr_bits;
    r.lines_buffered = lines;
    return r;
}

} // namespace

StreamResult streaming_run(const CostVolume& vol, const GrayImage& left,
                           const Penalties& pen, long long l_max, double fps) {
    if (vol.width != left.width || vol.height != left.height)
        throw std::runtime_error("dimension mismatch: cost volume vs image");
    pen.validate();

    const int W = vol.width, H = vol.height, D = vol.dmax;
    LineBank bank(left, 2);
    LrDataflow flow(W, D, pen, l_max);
    StreamResult res;
    res.disp = DisparityMap(W, H);
    for (int y = 0; y < H; ++y) {
        bank.advance(y, 0);
        flow.process_row(
            y, &vol.cost[vol.index(0, y, 0)],
            [&](int x, int yy) { return static_cast<int>(bank.at(x, yy)); },
            &res.disp.disp[res.disp.index(0, y)],
            &res.disp.valid[res.disp.index(0, y)]);
    }
    res.report = base_report(W, H, D, l_max, fps,
                             bitwidth_plan(vol.max_value(), pen), bank.lines());
    res.report.simulated_peak_occupancy = flow.peak_occupancy_bits();
    res.report.saturation_count = flow.saturation_count();
    return res;
}

StreamResult streaming_pipeline(const GrayImage& left, const GrayImage& right,
                                const SgmConfig& cfg, double fps) {
    validate_pair(left, right);
    cfg.validate();
    const CostFunction f = cfg.cost.variant;
    if (f != CostFunction::RankAd && f != CostFunction::RankSad &&
        f != CostFunction::UnifiedRank)
        throw std::runtime_error("streaming pipeline requires a rank-family cost");

    const int W = left.width, H = left.height, D = cfg.dmax;
    const Penalties pen = cfg.resolved_penalties();
    const KernelSpec& k = cfg.kernel;

    LineBank bank_l(left, std::max(2, k.rows));
    LineBank bank_r(right, k.rows);
    LrDataflow flow(W, D, pen, cfg.lmax);
    RowRank rank_l, rank_r;
    std::vector<uint16_t> cost_row(static_cast<size_t>(W) * D);

    StreamResult res;
    res.disp = DisparityMap(W, H);
    for (int y = 0; y < H; ++y) {
        bank_l.advance(y, k.radius_y());
        bank_r.advance(y, k.radius_y());
        rank_l.build(bank_l, k, W, y, 0);
        rank_r.build(bank_r, k, W, y, -(D - 1));
        for (int x = 0; x < W; ++x) {
            uint16_t* out = &cost_row[static_cast<size_t>(x) * D];
            for (int d = 0; d < D; ++d) {
                int c = 0;
                if (f == CostFunction::RankAd) {
                    c = cost_rank_ad(rank_l.rank(x), rank_r.rank(x - d));
                } else {
                    int ham = 0;
                    const uint64_t* a = rank_l.vec(x);
                    const uint64_t* b = rank_r.vec(x - d);
                    for (int wi = 0; wi < rank_l.words; ++wi)
                        ham += std::popcount(a[wi] ^ b[wi]);
                    c = (f == CostFunction::RankSad)
                            ? ham
                            : ham + cost_rank_ad(rank_l.rank(x), rank_r.rank(x - d));
                }
                out[d] = static_cast<uint16_t>(c);
            }
        }
        flow.process_row(
            y, cost_row.data(),
            [&](int x, int yy) { return static_cast<int>(bank_l.at(x, yy)); },
            &res.disp.disp[res.disp.index(0, y)],
            &res.disp.valid[res.disp.index(0, y)]);
    }
    res.report = base_report(W, H, D, cfg.lmax, fps,
                             bitwidth_plan(max_cost_bound(cfg.cost, k), pen),
                             bank_l.lines());
    res.report.simulated_peak_occupancy = flow.peak_occupancy_bits();
    res.report.saturation_count = flow.saturation_count();
    return res;
}

} // namespace sgmrank
