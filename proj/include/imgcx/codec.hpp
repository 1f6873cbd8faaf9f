#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "imgcx/image.hpp"

namespace imgcx::codec {

/// Tag stored with cached measures; bump whenever either codec's output changes.
inline constexpr std::string_view kCodecVersion = "lzw12-msb/1+dct8-expgolomb/1";

// LZW stream layout: 8-bit literals 0..255, CLEAR = 256, EOI = 257, first
// dictionary code 258. Code width grows 9 -> 12 bits; when the 4096-entry
// dictionary fills, CLEAR is emitted and the state resets. The stream always
// begins with CLEAR and ends with EOI; bits are packed most significant first
// and the last byte is zero-padded.
inline constexpr std::uint16_t kLzwClear = 256;
inline constexpr std::uint16_t kLzwEnd = 257;

std::vector<std::uint8_t> lzw_compress(std::span<const std::uint8_t> payload);

/// Inverse of lzw_compress. Throws InvalidInput on a malformed stream.
std::vector<std::uint8_t> lzw_decompress(std::span<const std::uint8_t> stream);

struct LossyCodecParams {
    /// (0, 1]; lower means coarser quantization.
    double quality = 0.75;
    void validate() const;
    /// round(100 * quality), clamped to [1, 100].
    int scaled_quality() const;
};

/// Base luminance table scaled by the conventional quality mapping, natural
/// (row-major) order.
std::array<int, 64> quantization_table(const LossyCodecParams& params);

struct LossyResult {
    std::size_t encoded_size = 0;        ///< bytes of the entropy-coded stream
    std::vector<std::uint8_t> stream;    ///< Exp-Golomb coded coefficients
    GrayImage reconstruction;            ///< 8-bit quantized, same size as input
};

/// Pluggable lossy encoder behind the C_mc measures.
class LossyCodec {
public:
    virtual ~LossyCodec() = default;
    virtual LossyResult encode(const GrayImage& img, const LossyCodecParams& params) const = 0;
    virtual std::string_view version() const = 0;
};

/// 8x8 block DCT with a scaled quantization table. Coefficients are zig-zag
/// ordered and run-length coded with static Exp-Golomb codes, so the stream
/// never shrinks when quantization gets finer: every coefficient magnitude is
/// monotone in quality and every code length is monotone in its argument.
class BlockDctCodec final : public LossyCodec {
public:
    LossyResult encode(const GrayImage& img, const LossyCodecParams& params) const override;
    std::string_view version() const override { return kCodecVersion; }
};

LossyResult lossy_encode(const GrayImage& img, const LossyCodecParams& params);

/// Root-mean-squared per-pixel difference. Throws InvalidInput on a size mismatch.
double rms_error(const GrayImage& a, const GrayImage& b);

}  // namespace imgcx::codec
