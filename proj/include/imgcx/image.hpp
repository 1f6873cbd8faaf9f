#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace imgcx {

/// Normalized single-channel raster. Intensities are in [0,1], row-major.
class GrayImage {
public:
    GrayImage() = default;
    /// Throws InvalidInput on a zero dimension or a size mismatch,
    /// InvalidParameter when a value lies outside [0,1] or is not finite.
    GrayImage(std::size_t width, std::size_t height, std::vector<double> data);
    /// Constant image.
    GrayImage(std::size_t width, std::size_t height, double value);

    /// 8-bit source, each byte divided by 255.
    static GrayImage from_bytes(std::size_t width, std::size_t height,
                                std::span<const std::uint8_t> bytes);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(std::size_t x, std::size_t y) const noexcept {
        return data_[y * width_ + x];
    }
    std::span<const double> pixels() const noexcept { return data_; }

    /// Row-major 8-bit serialization, round(v*255).
    std::vector<std::uint8_t> to_bytes() const;

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

/// Three-channel raster with channels in [0,1], interleaved RGB.
struct RgbImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> data;  // size = 3 * width * height
};

/// Foreground mask; every value is 0 or 1.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(std::size_t width, std::size_t height, std::uint8_t fill = 0);
    /// Throws InvalidInput when a value is not 0 or 1 or the size mismatches.
    BinaryImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::uint8_t operator()(std::size_t x, std::size_t y) const noexcept {
        return data_[y * width_ + x];
    }
    void set(std::size_t x, std::size_t y, bool on) noexcept {
        data_[y * width_ + x] = on ? 1 : 0;
    }
    std::span<const std::uint8_t> pixels() const noexcept { return data_; }
    std::size_t count() const noexcept;

    /// 0 -> 0.0, 1 -> 1.0
    GrayImage to_gray() const;

    bool operator==(const BinaryImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> data_;
};

enum class Level : std::uint8_t { White = 0, Grey = 1, Black = 2 };

class TriLevelImage {
public:
    TriLevelImage() = default;
    TriLevelImage(std::size_t width, std::size_t height, std::vector<Level> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    Level operator()(std::size_t x, std::size_t y) const noexcept {
        return data_[y * width_ + x];
    }
    std::span<const Level> pixels() const noexcept { return data_; }
    std::size_t count(Level level) const noexcept;

    /// White -> 255, Grey -> 128, Black -> 0, row-major.
    std::vector<std::uint8_t> to_bytes() const;
    GrayImage to_gray() const;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<Level> data_;
};

struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    std::size_t bin_count() const noexcept { return counts.size(); }
    /// Normalized bin probabilities count/total.
    std::vector<double> probabilities() const;
    std::size_t occupied_bins() const noexcept;
};

inline constexpr std::size_t kDefaultBins = 256;

/// Bin index of an intensity: min(floor(v*bins), bins-1).
std::size_t bin_index(double value, std::size_t bins) noexcept;

/// Rec.709 luminance. Throws InvalidInput on a zero-dimension raster.
GrayImage to_grayscale(const RgbImage& image);
/// Gray images pass through unchanged.
GrayImage to_grayscale(const GrayImage& image);

/// Throws InvalidParameter when bins < 2.
Histogram histogram(const GrayImage& img, std::size_t bins = kDefaultBins);

}  // namespace imgcx
