#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "imgcx/image.hpp"

namespace imgcx::io {

/// Raw file contents. Throws InvalidInput when the file cannot be read.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Decodes PNG or JPEG (sniffed from the signature) to luminance.
/// 8-bit samples are divided by 255, 16-bit PNG samples by 65535, and
/// alpha is composited over white. Color sources go through to_grayscale.
GrayImage decode_image(std::span<const std::uint8_t> encoded);

GrayImage load_image(const std::filesystem::path& path);

/// 8-bit grayscale PNG, round(v*255) per pixel.
std::vector<std::uint8_t> encode_png(const GrayImage& img);
void write_png(const GrayImage& img, const std::filesystem::path& path);

}  // namespace imgcx::io
