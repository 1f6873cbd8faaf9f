#pragma once

// Synthetic rasters shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "imgcx/image.hpp"

namespace imgcx::testing {

inline constexpr double kBackground = 0.2;
inline constexpr double kInk = 0.9;

inline GrayImage render(std::size_t w, std::size_t h, const std::function<double(double, double)>& f) {
    std::vector<double> d(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) d[y * w + x] = f(static_cast<double>(x), static_cast<double>(y));
    }
    return GrayImage(w, h, std::move(d));
}

inline bool in_disk(double x, double y, double cx, double cy, double r) {
    return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
}

inline GrayImage disk_image(std::size_t n = 64) {
    const double c = static_cast<double>(n) / 2.0;
    return render(n, n, [&](double x, double y) { return in_disk(x, y, c, c, c / 2) ? kInk : kBackground; });
}

inline GrayImage annulus_image(std::size_t n = 64) {
    const double c = static_cast<double>(n) / 2.0;
    return render(n, n, [&](double x, double y) {
        return in_disk(x, y, c, c, c / 2) && !in_disk(x, y, c, c, c / 4) ? kInk : kBackground;
    });
}

/// Three disks; the first has two holes. 3 components, 2 holes.
inline GrayImage three_disks_two_holes() {
    return render(128, 64, [](double x, double y) {
        if (in_disk(x, y, 24, 32, 18)) {
            if (in_disk(x, y, 16, 32, 5) || in_disk(x, y, 32, 32, 5)) return kBackground;
            return kInk;
        }
        if (in_disk(x, y, 64, 32, 12) || in_disk(x, y, 100, 32, 12)) return kInk;
        return kBackground;
    });
}

inline GrayImage noise_image(std::size_t w, std::size_t h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> b(w * h);
    for (auto& v : b) v = static_cast<std::uint8_t>(rng() & 0xFF);
    return GrayImage::from_bytes(w, h, b);
}

inline GrayImage gradient_image(std::size_t w, std::size_t h) {
    return render(w, h, [&](double x, double) { return x / static_cast<double>(w - 1); });
}

inline GrayImage step_image(std::size_t w, std::size_t h, std::size_t edge) {
    return render(w, h, [&](double x, double) { return x < static_cast<double>(edge) ? 0.0 : 1.0; });
}

/// Random 8-bit-valued image.
inline GrayImage random_image(std::mt19937_64& rng, std::size_t w, std::size_t h) {
    std::vector<std::uint8_t> b(w * h);
    const unsigned levels = 2 + static_cast<unsigned>(rng() % 255);
    for (auto& v : b) v = static_cast<std::uint8_t>((rng() % levels) * 255 / (levels - 1));
    return GrayImage::from_bytes(w, h, b);
}

/// Sierpinski carpet membership at base-3 resolution.
inline bool in_carpet(std::size_t x, std::size_t y) {
    while (x > 0 || y > 0) {
        if (x % 3 == 1 && y % 3 == 1) return false;
        x /= 3;
        y /= 3;
    }
    return true;
}

inline BinaryImage sierpinski_carpet(std::size_t n = 729) {
    BinaryImage m(n, n, 0);
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) m.set(x, y, in_carpet(x, y));
    }
    return m;
}

}  // namespace imgcx::testing
