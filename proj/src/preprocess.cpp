#include "imgcx/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "imgcx/errors.hpp"

namespace imgcx {

namespace {

// Tolerance for the strict "above the local mean" comparison. Window sums
// come from a summed-area table and carry ~1e-11 rounding on 1024^2 images.
constexpr double kMeanTieEps = 1e-9;

/// Summed-area table with clamped rectangular window queries.
class BoxSum {
public:
    template <typename F>
    BoxSum(std::size_t width, std::size_t height, F&& value)
        : w_(width), h_(height), table_((width + 1) * (height + 1), 0.0) {
        for (std::size_t y = 0; y < h_; ++y) {
            double row = 0.0;
            for (std::size_t x = 0; x < w_; ++x) {
                row += value(x, y);
                at(x + 1, y + 1) = at(x + 1, y) + row;
            }
        }
    }

    /// Sum and pixel count over the window of radius r centered at (x, y),
    /// shrunk at the borders.
    std::pair<double, std::size_t> window(std::size_t x, std::size_t y, std::size_t r) const {
        const std::size_t x0 = x > r ? x - r : 0;
        const std::size_t y0 = y > r ? y - r : 0;
        const std::size_t x1 = std::min(w_, x + r + 1);
        const std::size_t y1 = std::min(h_, y + r + 1);
        const double s = at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
        return {s, (x1 - x0) * (y1 - y0)};
    }

private:
    double& at(std::size_t x, std::size_t y) { return table_[y * (w_ + 1) + x]; }
    double at(std::size_t x, std::size_t y) const { return table_[y * (w_ + 1) + x]; }

    std::size_t w_, h_;
    std::vector<double> table_;
};

}  // namespace

void AdaptiveBinarizationParams::validate() const {
    if (radius < 1) throw InvalidParameter("adaptive binarization radius must be >= 1");
}

void StructuralParams::validate() const {
    if (coarse_radius < 1) throw InvalidParameter("coarse-grain radius must be >= 1");
    if (!(delta >= 0.0 && delta <= 0.5)) throw InvalidParameter("delta must lie in [0, 0.5]");
}

int otsu_split(const Histogram& hist) {
    if (hist.occupied_bins() < 2) return -1;
    const std::size_t bins = hist.bin_count();
    const double total = static_cast<double>(hist.total);
    double sum_all = 0.0;
    for (std::size_t i = 0; i < bins; ++i) sum_all += static_cast<double>(i) * hist.counts[i];

    std::vector<double> between(bins - 1, 0.0);
    double w0 = 0.0, sum0 = 0.0;
    for (std::size_t k = 0; k + 1 < bins; ++k) {
        w0 += static_cast<double>(hist.counts[k]);
        sum0 += static_cast<double>(k) * hist.counts[k];
        const double w1 = total - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        between[k] = w0 * w1 * (m0 - m1) * (m0 - m1);
    }
    const double best = *std::max_element(between.begin(), between.end());
    const double tol = best * 1e-12;
    int first = -1, last = -1;
    for (std::size_t k = 0; k < between.size(); ++k) {
        if (best - between[k] <= tol) {
            if (first < 0) first = static_cast<int>(k);
            last = static_cast<int>(k);
        } else if (first >= 0) {
            break;
        }
    }
    return (first + last) / 2;
}

MorphBinarization morphological_binarize(const GrayImage& img) {
    const std::size_t w = img.width(), h = img.height();
    MorphBinarization out{BinaryImage(w, h, 0), 0.0, 0.0, false};
    const Histogram hist = histogram(img, kDefaultBins);
    const int split = otsu_split(hist);
    if (split < 0) {
        out.degenerate = true;
        return out;
    }
    const std::size_t bins = hist.bin_count();
    out.strong_threshold = static_cast<double>(split + 1) / static_cast<double>(bins);
    out.weak_threshold = 0.5 * out.strong_threshold;

    std::vector<std::uint8_t> candidate(w * h, 0);
    std::deque<std::size_t> queue;
    BinaryImage& mask = out.mask;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double v = img(x, y);
            if (bin_index(v, bins) > static_cast<std::size_t>(split)) {
                mask.set(x, y, true);
                queue.push_back(y * w + x);
            } else if (v >= out.weak_threshold) {
                candidate[y * w + x] = 1;
            }
        }
    }
    while (!queue.empty()) {
        const std::size_t idx = queue.front();
        queue.pop_front();
        const std::size_t cx = idx % w, cy = idx / w;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const auto nx = static_cast<std::ptrdiff_t>(cx) + dx;
                const auto ny = static_cast<std::ptrdiff_t>(cy) + dy;
                if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(w) ||
                    ny >= static_cast<std::ptrdiff_t>(h)) {
                    continue;
                }
                const std::size_t n = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
                if (candidate[n]) {
                    candidate[n] = 0;
                    mask.set(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), true);
                    queue.push_back(n);
                }
            }
        }
    }
    return out;
}

LocalStats local_stats(const GrayImage& img, int radius) {
    AdaptiveBinarizationParams{radius}.validate();
    const std::size_t w = img.width(), h = img.height();
    const auto r = static_cast<std::size_t>(radius);
    BoxSum sum(w, h, [&](std::size_t x, std::size_t y) { return img(x, y); });
    BoxSum sq(w, h, [&](std::size_t x, std::size_t y) { return img(x, y) * img(x, y); });
    LocalStats out{w, h, std::vector<double>(w * h), std::vector<double>(w * h)};
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto [s, n] = sum.window(x, y, r);
            const double mean = s / static_cast<double>(n);
            const double var = sq.window(x, y, r).first / static_cast<double>(n) - mean * mean;
            out.mean[y * w + x] = mean;
            out.stddev[y * w + x] = std::sqrt(std::max(0.0, var));
        }
    }
    return out;
}

BinaryImage adaptive_binarize(const GrayImage& img, const AdaptiveBinarizationParams& params) {
    params.validate();
    const std::size_t w = img.width(), h = img.height();
    const auto r = static_cast<std::size_t>(params.radius);
    BoxSum sum(w, h, [&](std::size_t x, std::size_t y) { return img(x, y); });
    BinaryImage out(w, h, 0);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto [s, n] = sum.window(x, y, r);
            const double mean = s / static_cast<double>(n);
            out.set(x, y, img(x, y) - mean > kMeanTieEps);
        }
    }
    return out;
}

GrayImage sobel_edges(const GrayImage& img) {
    const std::size_t w = img.width(), h = img.height();
    if (w < 3 || h < 3) {
        throw InvalidInput("sobel_edges: image must be at least 3x3, got " + std::to_string(w) +
                           "x" + std::to_string(h));
    }
    auto px = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
        x = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(w) - 1);
        y = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(h) - 1);
        return img(static_cast<std::size_t>(x), static_cast<std::size_t>(y));
    };
    std::vector<double> mag(w * h);
    double peak = 0.0;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto xi = static_cast<std::ptrdiff_t>(x);
            const auto yi = static_cast<std::ptrdiff_t>(y);
            const double gx = (px(xi + 1, yi - 1) + 2.0 * px(xi + 1, yi) + px(xi + 1, yi + 1)) -
                              (px(xi - 1, yi - 1) + 2.0 * px(xi - 1, yi) + px(xi - 1, yi + 1));
            const double gy = (px(xi - 1, yi + 1) + 2.0 * px(xi, yi + 1) + px(xi + 1, yi + 1)) -
                              (px(xi - 1, yi - 1) + 2.0 * px(xi, yi - 1) + px(xi + 1, yi - 1));
            const double m = std::sqrt(gx * gx + gy * gy);
            mag[y * w + x] = m;
            peak = std::max(peak, m);
        }
    }
    if (peak > 0.0) {
        for (double& m : mag) m = std::min(1.0, m / peak);
    }
    return GrayImage(w, h, std::move(mag));
}

std::vector<double> coarse_field(const GrayImage& img, const StructuralParams& params) {
    params.validate();
    const std::size_t w = img.width(), h = img.height();
    const auto r = static_cast<std::size_t>(params.coarse_radius);
    BoxSum sum(w, h, [&](std::size_t x, std::size_t y) {
        return params.darkness ? 1.0 - img(x, y) : img(x, y);
    });
    std::vector<double> eta(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const auto [s, n] = sum.window(x, y, r);
            eta[y * w + x] = std::clamp(s / static_cast<double>(n), 0.0, 1.0);
        }
    }
    return eta;
}

TriLevelImage coarse_grain(const GrayImage& img, const StructuralParams& params) {
    const auto eta = coarse_field(img, params);
    std::vector<Level> levels(eta.size());
    const double upper = 1.0 - params.delta;
    std::transform(eta.begin(), eta.end(), levels.begin(), [&](double e) {
        if (e <= params.delta) return Level::White;
        if (e <= upper) return Level::Grey;
        return Level::Black;
    });
    return TriLevelImage(img.width(), img.height(), std::move(levels));
}

}  // namespace imgcx
