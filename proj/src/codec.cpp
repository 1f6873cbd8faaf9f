#include "imgcx/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "imgcx/errors.hpp"

namespace imgcx::codec {

namespace {

constexpr int kMinWidth = 9;
constexpr int kMaxWidth = 12;
constexpr std::size_t kDictSize = 1u << kMaxWidth;
constexpr std::uint16_t kFirstCode = 258;

int code_width(std::size_t next_code) {
    return std::min(kMaxWidth, static_cast<int>(std::bit_width(next_code)));
}

class BitWriter {
public:
    /// width <= 32
    void put(std::uint64_t code, int width) {
        acc_ = (acc_ << width) | code;
        bits_ += width;
        while (bits_ >= 8) {
            bits_ -= 8;
            out_.push_back(static_cast<std::uint8_t>((acc_ >> bits_) & 0xFFu));
        }
        acc_ &= (std::uint64_t{1} << bits_) - 1u;
    }
    std::size_t bit_count() const noexcept { return out_.size() * 8 + static_cast<std::size_t>(bits_); }
    std::vector<std::uint8_t> finish() {
        if (bits_ > 0) out_.push_back(static_cast<std::uint8_t>((acc_ << (8 - bits_)) & 0xFFu));
        bits_ = 0;
        acc_ = 0;
        return std::move(out_);
    }

private:
    std::uint64_t acc_ = 0;
    int bits_ = 0;
    std::vector<std::uint8_t> out_;
};

class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}
    bool get(int width, std::uint32_t& code) {
        while (bits_ < width) {
            if (pos_ >= in_.size()) return false;
            acc_ = (acc_ << 8) | in_[pos_++];
            bits_ += 8;
        }
        bits_ -= width;
        code = (acc_ >> bits_) & ((1u << width) - 1u);
        acc_ &= (1u << bits_) - 1u;
        return true;
    }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
    std::uint32_t acc_ = 0;
    int bits_ = 0;
};

}  // namespace

std::vector<std::uint8_t> lzw_compress(std::span<const std::uint8_t> payload) {
    // child[prefix * 256 + byte] holds the extending code, 0 = absent.
    std::vector<std::uint16_t> child(kDictSize * 256, 0);
    std::vector<std::uint32_t> used;
    used.reserve(kDictSize);
    std::size_t next = kFirstCode;

    BitWriter out;
    out.put(kLzwClear, kMinWidth);
    if (payload.empty()) {
        out.put(kLzwEnd, kMinWidth);
        return out.finish();
    }

    std::uint32_t prefix = payload[0];
    for (std::size_t i = 1; i < payload.size(); ++i) {
        const std::uint8_t c = payload[i];
        const std::uint32_t slot = prefix * 256u + c;
        if (child[slot] != 0) {
            prefix = child[slot];
            continue;
        }
        out.put(prefix, code_width(next));
        child[slot] = static_cast<std::uint16_t>(next);
        used.push_back(slot);
        ++next;
        if (next == kDictSize) {
            out.put(kLzwClear, kMaxWidth);
            for (std::uint32_t s : used) child[s] = 0;
            used.clear();
            next = kFirstCode;
        }
        prefix = c;
    }
    out.put(prefix, code_width(next));
    // The decoder adds one entry after the final code before reading EOI.
    out.put(kLzwEnd, code_width(next + 1));
    return out.finish();
}

std::vector<std::uint8_t> lzw_decompress(std::span<const std::uint8_t> stream) {
    struct Entry {
        std::uint16_t prefix;
        std::uint8_t last;
        std::uint8_t first;
        std::uint32_t length;
    };
    std::vector<Entry> dict(kDictSize);
    for (std::uint16_t i = 0; i < 256; ++i) {
        dict[i] = {0, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i), 1};
    }

    std::vector<std::uint8_t> out;
    auto emit = [&](std::uint32_t code) {
        const std::size_t len = dict[code].length;
        const std::size_t start = out.size();
        out.resize(start + len);
        for (std::size_t k = len; k-- > 0;) {
            out[start + k] = dict[code].last;
            code = dict[code].prefix;
        }
    };

    BitReader in(stream);
    std::size_t next = kFirstCode;
    std::int64_t prev = -1;
    bool started = false;
    for (;;) {
        const int width = prev < 0 ? kMinWidth : code_width(next + 1);
        std::uint32_t code = 0;
        if (!in.get(width, code)) throw InvalidInput("lzw: truncated stream");
        if (code == kLzwClear) {
            next = kFirstCode;
            prev = -1;
            started = true;
            continue;
        }
        if (!started) throw InvalidInput("lzw: stream does not begin with CLEAR");
        if (code == kLzwEnd) break;
        if (prev < 0) {
            if (code > 255) throw InvalidInput("lzw: invalid first code");
            emit(code);
            prev = code;
            continue;
        }
        if (code > next || next >= kDictSize) throw InvalidInput("lzw: code out of range");
        const auto p = static_cast<std::uint16_t>(prev);
        const std::uint8_t first = code < next ? dict[code].first : dict[p].first;
        dict[next] = {p, first, dict[p].first, dict[p].length + 1};
        ++next;
        emit(code);
        prev = code;
    }
    return out;
}

void LossyCodecParams::validate() const {
    if (!(quality > 0.0 && quality <= 1.0)) throw InvalidParameter("quality must lie in (0, 1]");
}

int LossyCodecParams::scaled_quality() const {
    return std::clamp(static_cast<int>(std::lround(100.0 * quality)), 1, 100);
}

namespace {

constexpr std::array<int, 64> kBaseLuma = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

constexpr std::array<int, 64> kZigZag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

// cos(k*pi/16), k = 0..8, spelled out so the transform does not depend on libm.
constexpr std::array<double, 9> kCos16 = {
    1.0,
    0.98078528040323044912618223613424,
    0.92387953251128675612818318939679,
    0.83146961230254523707878837761791,
    0.70710678118654752440084436210485,
    0.55557023301960222474283081394853,
    0.38268343236508977172845998403040,
    0.19509032201612826784828486847702,
    0.0};
constexpr double kInvSqrt8 = 0.35355339059327376220042218105242;

/// basis[u][x] = alpha(u) * cos((2x+1) u pi / 16)
std::array<std::array<double, 8>, 8> make_basis() {
    std::array<std::array<double, 8>, 8> b{};
    for (int u = 0; u < 8; ++u) {
        const double alpha = u == 0 ? kInvSqrt8 : 0.5;
        for (int x = 0; x < 8; ++x) {
            const int m = ((2 * x + 1) * u) % 32;
            double c;
            if (m <= 8) c = kCos16[m];
            else if (m <= 16) c = -kCos16[16 - m];
            else if (m <= 24) c = -kCos16[m - 16];
            else c = kCos16[32 - m];
            b[u][x] = alpha * c;
        }
    }
    return b;
}

const auto& basis() {
    static const auto b = make_basis();
    return b;
}

void forward_dct(const std::array<double, 64>& in, std::array<double, 64>& out) {
    const auto& b = basis();
    std::array<double, 64> tmp{};
    for (int y = 0; y < 8; ++y) {
        for (int u = 0; u < 8; ++u) {
            double s = 0.0;
            for (int x = 0; x < 8; ++x) s += b[u][x] * in[y * 8 + x];
            tmp[y * 8 + u] = s;
        }
    }
    for (int v = 0; v < 8; ++v) {
        for (int u = 0; u < 8; ++u) {
            double s = 0.0;
            for (int y = 0; y < 8; ++y) s += b[v][y] * tmp[y * 8 + u];
            out[v * 8 + u] = s;
        }
    }
}

void inverse_dct(const std::array<double, 64>& in, std::array<double, 64>& out) {
    const auto& b = basis();
    std::array<double, 64> tmp{};
    for (int v = 0; v < 8; ++v) {
        for (int x = 0; x < 8; ++x) {
            double s = 0.0;
            for (int u = 0; u < 8; ++u) s += b[u][x] * in[v * 8 + u];
            tmp[v * 8 + x] = s;
        }
    }
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            double s = 0.0;
            for (int v = 0; v < 8; ++v) s += b[v][y] * tmp[v * 8 + x];
            out[y * 8 + x] = s;
        }
    }
}

/// Order-0 Exp-Golomb code of n >= 0: floor(log2(n+1)) zeros, then n+1 in binary.
void put_exp_golomb(BitWriter& out, std::uint64_t n) {
    const int len = static_cast<int>(std::bit_width(n + 1));
    out.put(0, len - 1);
    out.put(n + 1, len);
}

/// Signed values interleave as 1, -1, 2, -2, ... -> 0, 1, 2, 3, ...
void put_signed(BitWriter& out, long v) {
    const auto mag = static_cast<std::uint64_t>(v < 0 ? -v : v);
    put_exp_golomb(out, v > 0 ? 2 * mag - 2 : 2 * mag - 1);
}



}  // namespace

std::array<int, 64> quantization_table(const LossyCodecParams& params) {
    params.validate();
    const int q = params.scaled_quality();
    const int scale = q < 50 ? 5000 / q : 200 - 2 * q;
    std::array<int, 64> table{};
    for (std::size_t i = 0; i < 64; ++i) {
        const long entry = std::lround(static_cast<double>(kBaseLuma[i] * scale) / 100.0);
        table[i] = static_cast<int>(std::clamp(entry, 1L, 255L));
    }
    return table;
}

LossyResult BlockDctCodec::encode(const GrayImage& img, const LossyCodecParams& params) const {
    const auto table = quantization_table(params);
    const std::size_t w = img.width(), h = img.height();
    const std::size_t bw = (w + 7) / 8, bh = (h + 7) / 8;

    BitWriter bits;
    std::vector<double> recon(w * h);
    std::array<double, 64> block{}, coef{}, back{};

    for (std::size_t by = 0; by < bh; ++by) {
        for (std::size_t bx = 0; bx < bw; ++bx) {
            for (std::size_t y = 0; y < 8; ++y) {
                const std::size_t sy = std::min(by * 8 + y, h - 1);
                for (std::size_t x = 0; x < 8; ++x) {
                    const std::size_t sx = std::min(bx * 8 + x, w - 1);
                    block[y * 8 + x] = img(sx, sy) * 255.0 - 128.0;
                }
            }
            forward_dct(block, coef);

            std::array<long, 64> quant{};
            for (std::size_t i = 0; i < 64; ++i) quant[i] = std::lround(coef[i] / table[i]);

            // DC is coded absolutely, AC as (run + 1, value) pairs in zig-zag
            // order, and a zero run code ends the block.
            put_exp_golomb(bits, static_cast<std::uint64_t>(quant[0] < 0 ? -2 * quant[0] - 1 : 2 * quant[0]));
            std::uint64_t run = 0;
            for (std::size_t k = 1; k < 64; ++k) {
                const long v = quant[static_cast<std::size_t>(kZigZag[k])];
                if (v == 0) {
                    ++run;
                    continue;
                }
                put_exp_golomb(bits, run + 1);
                put_signed(bits, v);
                run = 0;
            }
            put_exp_golomb(bits, 0);

            for (std::size_t i = 0; i < 64; ++i) coef[i] = static_cast<double>(quant[i] * table[i]);
            inverse_dct(coef, back);
            for (std::size_t y = 0; y < 8 && by * 8 + y < h; ++y) {
                for (std::size_t x = 0; x < 8 && bx * 8 + x < w; ++x) {
                    const double level = std::clamp(std::round(back[y * 8 + x] + 128.0), 0.0, 255.0);
                    recon[(by * 8 + y) * w + bx * 8 + x] = level / 255.0;
                }
            }
        }
    }

    LossyResult result;
    result.stream = bits.finish();
    result.encoded_size = result.stream.size();
    result.reconstruction = GrayImage(w, h, std::move(recon));
    return result;
}

LossyResult lossy_encode(const GrayImage& img, const LossyCodecParams& params) {
    return BlockDctCodec{}.encode(img, params);
}

double rms_error(const GrayImage& a, const GrayImage& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw InvalidInput("rms_error: image sizes differ");
    }
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    double sum = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = pa[i] - pb[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(pa.size()));
}

}  // namespace imgcx::codec
