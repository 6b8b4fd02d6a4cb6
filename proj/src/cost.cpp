#include "sgmrank/cost.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgmrank {

const char* cost_function_name(CostFunction f) {
    switch (f) {
        case CostFunction::Sad: return "sad";
        case CostFunction::Bt: return "bt";
        case CostFunction::RankAd: return "rank_ad";
        case CostFunction::RankSad: return "rank_sad";
        case CostFunction::BlendSadRt: return "blend";
        case CostFunction::UnifiedRank: return "unified";
    }
    return "?";
}

CostFunction cost_function_from_name(const std::string& name) {
    if (name == "sad") return CostFunction::Sad;
    if (name == "bt") return CostFunction::Bt;
    if (name == "rank_ad") return CostFunction::RankAd;
    if (name == "rank_sad") return CostFunction::RankSad;
    if (name == "blend") return CostFunction::BlendSadRt;
    if (name == "unified") return CostFunction::UnifiedRank;
    throw std::runtime_error("unknown cost function: " + name);
}

void CostKind::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::runtime_error("alpha must lie in [0,1]");
}

void KernelSpec::validate() const {
    if (rows < 1 || cols < 1 || rows % 2 == 0 || cols % 2 == 0)
        throw std::runtime_error("kernel dimensions must be odd and >= 1");
}

uint16_t CostVolume::max_value() const {
    uint16_t m = 0;
    for (uint16_t v : cost) m = std::max(m, v);
    return m;
}

int rank_transform(const GrayImage& img, int px, int py, const KernelSpec& kernel) {
    const int ry = kernel.radius_y(), rx = kernel.radius_x();
    const uint8_t center = img.at_clamped(px, py);
    int count = 0;
    for (int oy = -ry; oy <= ry; ++oy)
        for (int ox = -rx; ox <= rx; ++ox)
            count += img.at_clamped(px + ox, py + oy) < center;
    return count;
}

std::vector<uint8_t> comparison_vector(const GrayImage& img, int px, int py,
                                       const KernelSpec& kernel) {
    const int ry = kernel.radius_y(), rx = kernel.radius_x();
    const uint8_t center = img.at_clamped(px, py);
    std::vector<uint8_t> bits;
    bits.reserve(static_cast<size_t>(kernel.area()));
    for (int oy = -ry; oy <= ry; ++oy)
        for (int ox = -rx; ox <= rx; ++ox)
            bits.push_back(img.at_clamped(px + ox, py + oy) < center ? 1 : 0);
    return bits;
}

int cost_rank_ad(int left_rank, int right_rank) {
    return std::abs(left_rank - right_rank);
}

int cost_rank_sad(const std::vector<uint8_t>& left_bits,
                  const std::vector<uint8_t>& right_bits) {
    if (left_bits.size() != right_bits.size())
        throw std::runtime_error("comparison vector length mismatch");
    int sum = 0;
    for (size_t i = 0; i < left_bits.size(); ++i)
        sum += std::abs(int(left_bits[i]) - int(right_bits[i]));
    return sum;
}

int cost_unified(const std::vector<uint8_t>& left_bits,
                 const std::vector<uint8_t>& right_bits) {
    int pop_l = 0, pop_r = 0;
    for (uint8_t b : left_bits) pop_l += b;
    for (uint8_t b : right_bits) pop_r += b;
    return cost_rank_ad(pop_l, pop_r) + cost_rank_sad(left_bits, right_bits);
}

int cost_sad(const GrayImage& left, const GrayImage& right, int px, int py,
             int d, const KernelSpec& kernel) {
    const int ry = kernel.radius_y(), rx = kernel.radius_x();
    int sum = 0;
    for (int oy = -ry; oy <= ry; ++oy)
        for (int ox = -rx; ox <= rx; ++ox)
            sum += std::abs(int(left.at_clamped(px + ox, py + oy)) -
                            int(right.at_clamped(px + ox - d, py + oy)));
    return sum;
}

namespace {

// Directional BT term in half-intensity units: distance from value 2*ref to
// the interval spanned by the pixel value and its half-pixel interpolants.
int bt_directional_half(int ref2, const GrayImage& img, int x, int y) {
    const int v = img.at_clamped(x, y);
    const int vm = v + img.at_clamped(x - 1, y); // 2 * half-pixel interpolant
    const int vp = v + img.at_clamped(x + 1, y);
    const int lo = std::min(2 * v, std::min(vm, vp));
    const int hi = std::max(2 * v, std::max(vm, vp));
    return std::max(0, std::max(ref2 - hi, lo - ref2));
}

} // namespace

int cost_bt(const GrayImage& left, const GrayImage& right, int px, int py, int d) {
    const int xr = px - d;
    const int dl = bt_directional_half(2 * left.at_clamped(px, py), right, xr, py);
    const int dr = bt_directional_half(2 * right.at_clamped(xr, py), left, px, py);
    const int m = std::min(dl, dr); // half units, >= 0
    return (m + 1) >> 1;            // round half up
}

namespace {

// Packed comparison vectors for every window center in a column range that
// may extend left of the image (disparity-shifted right centers).
struct RankField {
    int x0 = 0;     // first center column, possibly negative
    int span = 0;   // centers per row
    int words = 0;  // u64 words per vector
    std::vector<uint64_t> bits;
    std::vector<uint16_t> pop;

    const uint64_t* vec(int x, int y) const {
        return &bits[(static_cast<size_t>(y) * span + (x - x0)) * words];
    }
    int rank(int x, int y) const {
        return pop[static_cast<size_t>(y) * span + (x - x0)];
    }
};

RankField build_rank_field(const GrayImage& img, const KernelSpec& kernel, int x0) {
    RankField f;
    f.x0 = x0;
    f.span = img.width - x0;
    f.words = (kernel.area() + 63) / 64;
    f.bits.assign(static_cast<size_t>(f.span) * img.height * f.words, 0);
    f.pop.assign(static_cast<size_t>(f.span) * img.height, 0);

    const int ry = kernel.radius_y(), rx = kernel.radius_x();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height; ++y) {
        for (int cx = x0; cx < img.width; ++cx) {
            const uint8_t center = img.at_clamped(cx, y);
            uint64_t* w = &f.bits[(static_cast<size_t>(y) * f.span + (cx - x0)) * f.words];
            int bit = 0, pop = 0;
            for (int oy = -ry; oy <= ry; ++oy) {
                for (int ox = -rx; ox <= rx; ++ox, ++bit) {
                    if (img.at_clamped(cx + ox, y + oy) < center) {
                        w[bit >> 6] |= uint64_t(1) << (bit & 63);
                        ++pop;
                    }
                }
            }
            f.pop[static_cast<size_t>(y) * f.span + (cx - x0)] = static_cast<uint16_t>(pop);
        }
    }
    return f;
}

int hamming(const uint64_t* a, const uint64_t* b, int words) {
    int n = 0;
    for (int i = 0; i < words; ++i) n += std::popcount(a[i] ^ b[i]);
    return n;
}

} // namespace

CostVolume build_cost_volume(const GrayImage& left, const GrayImage& right,
                             const CostKind& kind, const KernelSpec& kernel,
                             int dmax) {
    validate_pair(left, right);
    kernel.validate();
    kind.validate();
    if (dmax < 1)
        throw std::runtime_error("disparity count must be >= 1");

    CostVolume vol(left.width, left.height, dmax);
    const bool rank_family = kind.variant == CostFunction::RankAd ||
                             kind.variant == CostFunction::RankSad ||
                             kind.variant == CostFunction::UnifiedRank ||
                             kind.variant == CostFunction::BlendSadRt;

    RankField rl, rr;
    if (rank_family) {
        rl = build_rank_field(left, kernel, 0);
        rr = build_rank_field(right, kernel, -(dmax - 1));
    }

#pragma omp parallel for schedule(static)
    for (int y = 0; y < left.height; ++y) {
        for (int x = 0; x < left.width; ++x) {
            uint16_t* out = &vol.cost[vol.index(x, y, 0)];
            for (int d = 0; d < dmax; ++d) {
                int c = 0;
                switch (kind.variant) {
                    case CostFunction::Sad:
                        c = cost_sad(left, right, x, y, d, kernel);
                        break;
                    case CostFunction::Bt:
                        c = cost_bt(left, right, x, y, d);
                        break;
                    case CostFunction::RankAd:
                        c = cost_rank_ad(rl.rank(x, y), rr.rank(x - d, y));
                        break;
                    case CostFunction::RankSad:
                        c = hamming(rl.vec(x, y), rr.vec(x - d, y), rl.words);
                        break;
                    case CostFunction::UnifiedRank:
                        c = cost_rank_ad(rl.rank(x, y), rr.rank(x - d, y)) +
                            hamming(rl.vec(x, y), rr.vec(x - d, y), rl.words);
                        break;
                    case CostFunction::BlendSadRt: {
                        const int sad = cost_sad(left, right, x, y, d, kernel);
                        const int rt = cost_rank_ad(rl.rank(x, y), rr.rank(x - d, y));
                        c = static_cast<int>(
                            std::llround(kind.alpha * sad + (1.0 - kind.alpha) * rt));
                        break;
                    }
                }
                out[d] = static_cast<uint16_t>(c);
            }
        }
    }
    return vol;
}

int max_cost_bound(const CostKind& kind, const KernelSpec& kernel) {
    const int mn = kernel.area();
    switch (kind.variant) {
        case CostFunction::Sad: return 255 * mn;
        case CostFunction::Bt: return 255;
        case CostFunction::RankAd: return mn - 1;
        case CostFunction::RankSad: return 2 * (mn - 1);
        case CostFunction::UnifiedRank: return 3 * (mn - 1);
        case CostFunction::BlendSadRt: return 255 * mn;
    }
    return 0;
}

void write_cost_volume_u16(const CostVolume& vol, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path + ": cannot open for writing");
    out << "COSTVOL " << vol.width << " " << vol.height << " " << vol.dmax << "\n";
    std::vector<uint8_t> buf(vol.cost.size() * 2);
    for (size_t i = 0; i < vol.cost.size(); ++i) {
        const uint16_t v = vol.cost[i];
        buf[2 * i] = static_cast<uint8_t>(v & 0xff);
        buf[2 * i + 1] = static_cast<uint8_t>(v >> 8);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out)
        throw std::runtime_error(path + ": write failure");
}

CostVolume read_cost_volume_u16(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(path + ": unreadable file");
    std::string magic;
    int w = 0, h = 0, d = 0;
    if (!(in >> magic >> w >> h >> d) || magic != "COSTVOL" || w < 1 || h < 1 || d < 1)
        throw std::runtime_error(path + ": malformed COSTVOL header");
    in.get();
    CostVolume vol(w, h, d);
    std::vector<uint8_t> buf(vol.cost.size() * 2);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
    if (static_cast<size_t>(in.gcount()) != buf.size())
        throw std::runtime_error(path + ": truncated COSTVOL data");
    for (size_t i = 0; i < vol.cost.size(); ++i)
        vol.cost[i] = static_cast<uint16_t>(buf[2 * i] | (buf[2 * i + 1] << 8));
    return vol;
}

} // namespace sgmrank
