#include "sgmrank/image.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sgmrank {

namespace {

struct PnmHeader {
    int magic = 0; // 2, 3, 5 or 6
    int width = 0;
    int height = 0;
    int maxval = 0;
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

// Skips whitespace and '#' comment lines between header tokens.
void skip_separators(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            in.get();
        } else {
            return;
        }
    }
}

int read_header_int(std::istream& in, const std::string& path, const char* field) {
    skip_separators(in);
    int v = 0;
    if (!(in >> v) || v < 0)
        fail(path, std::string("malformed header: ") + field);
    return v;
}

PnmHeader read_header(std::istream& in, const std::string& path) {
    PnmHeader h;
    char p = 0, digit = 0;
    in >> p >> digit;
    if (!in || p != 'P' || digit < '2' || digit > '6' || digit == '4')
        fail(path, "malformed header: magic (expected P2/P3/P5/P6)");
    h.magic = digit - '0';
    h.width = read_header_int(in, path, "width");
    h.height = read_header_int(in, path, "height");
    if (h.width < 1 || h.height < 1)
        fail(path, "malformed header: zero dimension");
    h.maxval = read_header_int(in, path, "maxval");
    if (h.maxval != 255)
        fail(path, "maxval " + std::to_string(h.maxval) + " unsupported (expected 255)");
    // A single whitespace byte separates the header from binary data.
    in.get();
    return h;
}

std::vector<uint8_t> read_samples(std::istream& in, const PnmHeader& h,
                                  const std::string& path) {
    const size_t n = static_cast<size_t>(h.width) * h.height *
                     (h.magic == 3 || h.magic == 6 ? 3 : 1);
    std::vector<uint8_t> raw(n);
    if (h.magic == 5 || h.magic == 6) {
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in.gcount()) != n)
            fail(path, "truncated raster data");
    } else {
        for (size_t i = 0; i < n; ++i) {
            int v;
            if (!(in >> v) || v < 0 || v > h.maxval)
                fail(path, "malformed sample at index " + std::to_string(i));
            raw[i] = static_cast<uint8_t>(v);
        }
    }
    return raw;
}

uint8_t luma(uint8_t r, uint8_t g, uint8_t b) {
    return static_cast<uint8_t>(
        std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

} // namespace

GrayImage load_gray(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(path, "unreadable file");
    const PnmHeader h = read_header(in, path);
    const std::vector<uint8_t> raw = read_samples(in, h, path);

    GrayImage img(h.width, h.height);
    if (h.magic == 2 || h.magic == 5) {
        img.data = raw;
    } else {
        for (size_t i = 0; i < img.size(); ++i)
            img.data[i] = luma(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]);
    }
    return img;
}

GroundTruthMap load_ground_truth(const std::string& path, double scale_divisor) {
    if (!(scale_divisor > 0.0))
        throw std::runtime_error(path + ": scale divisor must be positive");
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(path, "unreadable file");
    const PnmHeader h = read_header(in, path);
    if (h.magic == 3 || h.magic == 6)
        fail(path, "ground truth must be PGM, got PPM");
    const std::vector<uint8_t> raw = read_samples(in, h, path);

    GroundTruthMap gt;
    gt.width = h.width;
    gt.height = h.height;
    gt.disparity.resize(raw.size(), 0.0f);
    gt.known_mask.resize(raw.size(), 0);
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != 0) {
            gt.disparity[i] = static_cast<float>(raw[i] / scale_divisor);
            gt.known_mask[i] = 1;
        }
    }
    return gt;
}

void save_gray(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error(path + ": cannot open for writing");
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.size()));
    if (!out)
        throw std::runtime_error(path + ": write failure");
}

void validate_pair(const GrayImage& left, const GrayImage& right) {
    if (!left.same_size(right)) {
        std::ostringstream os;
        os << "dimension mismatch: left " << left.width << "x" << left.height
           << " vs right " << right.width << "x" << right.height;
        throw std::runtime_error(os.str());
    }
}

} // namespace sgmrank
