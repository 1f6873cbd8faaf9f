#include "imgcx/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "imgcx/errors.hpp"

namespace imgcx {

namespace {

constexpr std::array<std::string_view, kMeasureCount> kNames = {
    "S", "E", "T", "gamma", "C_a", "C_s", "C_mc", "C_mc_E", "D", "D_a", "skew"};

/// Number of connected regions of cells equal to `target`.
std::size_t count_regions(const std::vector<std::uint8_t>& grid, std::size_t w, std::size_t h,
                          std::uint8_t target, bool eight_connected) {
    std::vector<std::uint8_t> seen(grid.size(), 0);
    std::vector<std::size_t> stack;
    std::size_t regions = 0;
    for (std::size_t start = 0; start < grid.size(); ++start) {
        if (grid[start] != target || seen[start]) continue;
        ++regions;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            const auto x = static_cast<std::ptrdiff_t>(idx % w);
            const auto y = static_cast<std::ptrdiff_t>(idx / w);
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (!eight_connected && dx != 0 && dy != 0) continue;
                    const auto nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(w) ||
                        ny >= static_cast<std::ptrdiff_t>(h)) {
                        continue;
                    }
                    const std::size_t n = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
                    if (grid[n] == target && !seen[n]) {
                        seen[n] = 1;
                        stack.push_back(n);
                    }
                }
            }
        }
    }
    return regions;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

std::size_t occupied_cells(const BinaryImage& mask, std::size_t s, std::size_t ox, std::size_t oy) {
    // Cell (i, j) covers [i*s - ox, (i+1)*s - ox) horizontally, same vertically.
    const std::size_t w = mask.width(), h = mask.height();
    const std::size_t cw = (w + ox + s - 1) / s, ch = (h + oy + s - 1) / s;
    std::vector<std::uint8_t> cells(cw * ch, 0);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            if (mask(x, y)) cells[((y + oy) / s) * cw + (x + ox) / s] = 1;
        }
    }
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

}  // namespace

std::string_view measure_name(Measure m) { return kNames[static_cast<std::size_t>(m)]; }

std::optional<Measure> measure_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return static_cast<Measure>(i);
    }
    return std::nullopt;
}

void FractalAestheticParams::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameter("sigma must be > 0");
    if (!std::isfinite(peak)) throw InvalidParameter("peak must be finite");
}

void MeasureConfig::validate() const {
    structural.validate();
    fractal_binarization.validate();
    aesthetic.validate();
    lossy.validate();
    if (histogram_bins < 2) throw InvalidParameter("histogram bins must be >= 2");
}

double entropy(const Histogram& hist) {
    double s = 0.0;
    for (double p : hist.probabilities()) {
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double energy(const Histogram& hist) {
    double e = 0.0;
    for (double p : hist.probabilities()) e += p * p;
    return e;
}

double entropy(const GrayImage& img, std::size_t bins) { return entropy(histogram(img, bins)); }
double energy(const GrayImage& img, std::size_t bins) { return energy(histogram(img, bins)); }

Topology topology(const BinaryImage& mask) {
    const std::size_t w = mask.width(), h = mask.height();
    std::vector<std::uint8_t> grid(mask.pixels().begin(), mask.pixels().end());
    Topology t;
    t.components = count_regions(grid, w, h, 1, true);

    // A one-pixel background frame joins every border-touching background
    // region into a single outer region.
    const std::size_t pw = w + 2, ph = h + 2;
    std::vector<std::uint8_t> padded(pw * ph, 0);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) padded[(y + 1) * pw + x + 1] = mask(x, y);
    }
    t.holes = count_regions(padded, pw, ph, 0, false) - 1;
    return t;
}

Topology topology(const GrayImage& img) {
    const auto bin = morphological_binarize(img);
    if (bin.degenerate) return Topology{0, 0, true};
    Topology t = topology(bin.mask);
    t.strong_threshold = bin.strong_threshold;
    t.weak_threshold = bin.weak_threshold;
    return t;
}

double contours(const GrayImage& img) { return topology(img).contours(); }
double euler(const GrayImage& img) { return topology(img).euler(); }

double compression_ratio(std::span<const std::uint8_t> bytes) {
    return static_cast<double>(codec::lzw_compress(bytes).size()) /
           static_cast<double>(bytes.size());
}

double algorithmic_complexity(const GrayImage& img) { return compression_ratio(img.to_bytes()); }

double structural_complexity(const GrayImage& img, const StructuralParams& params) {
    return compression_ratio(coarse_grain(img, params).to_bytes());
}

double mc_complexity(const GrayImage& img, const codec::LossyCodecParams& params) {
    const auto encoded = codec::lossy_encode(img, params);
    const double rms = codec::rms_error(img, encoded.reconstruction);
    return rms * static_cast<double>(encoded.encoded_size) / static_cast<double>(img.size());
}

double mc_complexity_edges(const GrayImage& img, const codec::LossyCodecParams& params) {
    return mc_complexity(sobel_edges(img), params);
}

FractalResult box_counting_dimension(const BinaryImage& mask, bool offset_averaging) {
    const std::size_t limit = std::min(mask.width(), mask.height()) / 2;
    std::vector<std::size_t> sizes;
    for (std::size_t s = 2; s <= limit; s *= 2) sizes.push_back(s);
    if (sizes.size() < 4) {
        throw InvalidInput("box counting needs at least 4 box sizes; image is " +
                           std::to_string(mask.width()) + "x" + std::to_string(mask.height()));
    }
    FractalResult result;
    if (mask.count() == 0) {
        result.degenerate = true;
        return result;
    }
    std::vector<double> xs, ys;
    for (std::size_t s : sizes) {
        double n;
        if (offset_averaging) {
            const std::size_t half = s / 2;
            n = (static_cast<double>(occupied_cells(mask, s, 0, 0)) +
                 static_cast<double>(occupied_cells(mask, s, half, 0)) +
                 static_cast<double>(occupied_cells(mask, s, 0, half)) +
                 static_cast<double>(occupied_cells(mask, s, half, half))) /
                4.0;
        } else {
            n = static_cast<double>(occupied_cells(mask, s, 0, 0));
        }
        result.counts.push_back({s, n});
        xs.push_back(-std::log(static_cast<double>(s)));
        ys.push_back(std::log(n));
    }
    result.dimension = least_squares_slope(xs, ys);
    return result;
}

FractalResult fractal_dimension(const GrayImage& img, const AdaptiveBinarizationParams& binarization,
                                bool offset_averaging) {
    return box_counting_dimension(adaptive_binarize(img, binarization), offset_averaging);
}

double fractal_aesthetic(double dimension, const FractalAestheticParams& params) {
    params.validate();
    const double d = dimension - params.peak;
    return std::exp(-(d * d) / (2.0 * params.sigma * params.sigma));
}

double fractal_aesthetic(const GrayImage& img, const FractalAestheticParams& params,
                         const AdaptiveBinarizationParams& binarization) {
    return fractal_aesthetic(fractal_dimension(img, binarization).dimension, params);
}

double skew(const GrayImage& img) {
    const auto px = img.pixels();
    if (std::all_of(px.begin(), px.end(), [&](double v) { return v == px.front(); })) {
        throw UndefinedValue("skew is undefined for a constant image");
    }
    const double n = static_cast<double>(px.size());
    const double mean = std::accumulate(px.begin(), px.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : px) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    return m3 / std::pow(m2, 1.5);
}

MeasureVector measure_all(const GrayImage& img, const MeasureConfig& config) {
    config.validate();
    MeasureVector mv;

    auto guarded = [&](Measure m, auto&& compute) {
        try {
            mv[m] = compute();
        } catch (const std::exception& e) {
            mv[m] = std::nullopt;
            mv.warnings.push_back(std::string(measure_name(m)) + ": " + e.what());
        }
    };

    const Histogram hist = histogram(img, config.histogram_bins);
    guarded(Measure::Entropy, [&] { return entropy(hist); });
    guarded(Measure::Energy, [&] { return energy(hist); });

    Topology topo;
    guarded(Measure::Contours, [&] {
        topo = topology(img);
        return topo.contours();
    });
    mv.binarization_degenerate = topo.degenerate;
    mv.strong_threshold = topo.strong_threshold;
    mv.weak_threshold = topo.weak_threshold;
    guarded(Measure::Euler, [&] { return topo.euler(); });

    guarded(Measure::AlgorithmicComplexity, [&] { return algorithmic_complexity(img); });
    guarded(Measure::StructuralComplexity,
            [&] { return structural_complexity(img, config.structural); });
    guarded(Measure::MachadoCardoso, [&] { return mc_complexity(img, config.lossy); });
    guarded(Measure::MachadoCardosoEdges, [&] { return mc_complexity_edges(img, config.lossy); });

    std::optional<FractalResult> fractal;
    guarded(Measure::FractalDimension, [&] {
        fractal = fractal_dimension(img, config.fractal_binarization, config.box_offset_averaging);
        return fractal->dimension;
    });
    if (fractal) {
        mv.fractal_degenerate = fractal->degenerate;
        guarded(Measure::FractalAesthetic,
                [&] { return fractal_aesthetic(fractal->dimension, config.aesthetic); });
    }
    guarded(Measure::Skew, [&] { return skew(img); });
    return mv;
}

}  // namespace imgcx
