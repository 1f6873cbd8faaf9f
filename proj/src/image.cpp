#include "imgcx/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imgcx/errors.hpp"

namespace imgcx {

namespace {

void check_dims(std::size_t width, std::size_t height, std::size_t length, const char* what) {
    if (width == 0 || height == 0) {
        throw InvalidInput(std::string(what) + ": zero-dimension raster");
    }
    if (length != width * height) {
        throw InvalidInput(std::string(what) + ": data length " + std::to_string(length) +
                           " does not match " + std::to_string(width) + "x" +
                           std::to_string(height));
    }
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width_, height_, data_.size(), "GrayImage");
    for (double v : data_) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw InvalidParameter("GrayImage: intensity outside [0,1]");
        }
    }
}

GrayImage::GrayImage(std::size_t width, std::size_t height, double value)
    : GrayImage(width, height, std::vector<double>(width * height, value)) {}

GrayImage GrayImage::from_bytes(std::size_t width, std::size_t height,
                                std::span<const std::uint8_t> bytes) {
    std::vector<double> data(bytes.size());
    std::transform(bytes.begin(), bytes.end(), data.begin(),
                   [](std::uint8_t b) { return static_cast<double>(b) / 255.0; });
    return GrayImage(width, height, std::move(data));
}

std::vector<std::uint8_t> GrayImage::to_bytes() const {
    std::vector<std::uint8_t> out(data_.size());
    std::transform(data_.begin(), data_.end(), out.begin(), [](double v) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    });
    return out;
}

BinaryImage::BinaryImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), data_(width * height, fill ? 1 : 0) {
    check_dims(width_, height_, data_.size(), "BinaryImage");
}

BinaryImage::BinaryImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width_, height_, data_.size(), "BinaryImage");
    if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; })) {
        throw InvalidInput("BinaryImage: values must be 0 or 1");
    }
}

std::size_t BinaryImage::count() const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), std::uint8_t{1}));
}

GrayImage BinaryImage::to_gray() const {
    std::vector<double> out(data_.begin(), data_.end());
    return GrayImage(width_, height_, std::move(out));
}

TriLevelImage::TriLevelImage(std::size_t width, std::size_t height, std::vector<Level> data)
    : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width_, height_, data_.size(), "TriLevelImage");
}

std::size_t TriLevelImage::count(Level level) const noexcept {
    return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), level));
}

std::vector<std::uint8_t> TriLevelImage::to_bytes() const {
    std::vector<std::uint8_t> out(data_.size());
    std::transform(data_.begin(), data_.end(), out.begin(), [](Level l) -> std::uint8_t {
        switch (l) {
            case Level::White: return 255;
            case Level::Grey: return 128;
            case Level::Black: return 0;
        }
        return 0;
    });
    return out;
}

GrayImage TriLevelImage::to_gray() const {
    return GrayImage::from_bytes(width_, height_, to_bytes());
}

std::vector<double> Histogram::probabilities() const {
    std::vector<double> p(counts.size(), 0.0);
    if (total == 0) return p;
    const double n = static_cast<double>(total);
    for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / n;
    return p;
}

std::size_t Histogram::occupied_bins() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [](std::uint64_t c) { return c > 0; }));
}

std::size_t bin_index(double value, std::size_t bins) noexcept {
    const double scaled = std::floor(value * static_cast<double>(bins));
    if (scaled <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(scaled), bins - 1);
}

GrayImage to_grayscale(const RgbImage& image) {
    if (image.width == 0 || image.height == 0) {
        throw InvalidInput("to_grayscale: zero-dimension raster");
    }
    const std::size_t n = image.width * image.height;
    if (image.data.size() != 3 * n) {
        throw InvalidInput("to_grayscale: RGB data length mismatch");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = image.data[3 * i];
        const double g = image.data[3 * i + 1];
        const double b = image.data[3 * i + 2];
        if (r == g && g == b) {
            out[i] = std::clamp(r, 0.0, 1.0);
        } else {
            out[i] = std::clamp(0.2126 * r + 0.7152 * g + 0.0722 * b, 0.0, 1.0);
        }
    }
    return GrayImage(image.width, image.height, std::move(out));
}

GrayImage to_grayscale(const GrayImage& image) { return image; }

Histogram histogram(const GrayImage& img, std::size_t bins) {
    if (bins < 2) throw InvalidParameter("histogram: bins must be >= 2");
    Histogram h;
    h.counts.assign(bins, 0);
    for (double v : img.pixels()) ++h.counts[bin_index(v, bins)];
    h.total = img.size();
    return h;
}

}  // namespace imgcx
