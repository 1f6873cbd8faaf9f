#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imgcx/codec.hpp"
#include "imgcx/image.hpp"
#include "imgcx/preprocess.hpp"

namespace imgcx {

enum class Measure : std::size_t {
    Entropy,               // S
    Energy,                // E
    Contours,              // T
    Euler,                 // gamma
    AlgorithmicComplexity, // C_a
    StructuralComplexity,  // C_s
    MachadoCardoso,        // C_mc
    MachadoCardosoEdges,   // C_mc^E
    FractalDimension,      // D
    FractalAesthetic,      // D_a
    Skew,
};

inline constexpr std::size_t kMeasureCount = 11;

inline constexpr std::array<Measure, kMeasureCount> kAllMeasures = {
    Measure::Entropy,        Measure::Energy,
    Measure::Contours,       Measure::Euler,
    Measure::AlgorithmicComplexity, Measure::StructuralComplexity,
    Measure::MachadoCardoso, Measure::MachadoCardosoEdges,
    Measure::FractalDimension, Measure::FractalAesthetic,
    Measure::Skew};

/// Short column name: S, E, T, gamma, C_a, C_s, C_mc, C_mc_E, D, D_a, skew.
std::string_view measure_name(Measure m);
std::optional<Measure> measure_from_name(std::string_view name);

/// Gaussian preference curve over fractal dimension.
struct FractalAestheticParams {
    double peak = 1.35;
    double sigma = 0.2;
    void validate() const;
};

/// Parameters for every measure; defaults are the reference settings.
struct MeasureConfig {
    StructuralParams structural;                      // (r_cg, delta) = (5, 0.23)
    AdaptiveBinarizationParams fractal_binarization;  // r = 2
    FractalAestheticParams aesthetic;                 // (p, sigma) = (1.35, 0.2)
    codec::LossyCodecParams lossy;                    // quality 0.75
    std::size_t histogram_bins = kDefaultBins;
    bool box_offset_averaging = false;
    void validate() const;
};

/// One record of all per-image measurements; a missing value means the
/// measure is undefined for this image (e.g. skew of a constant image).
struct MeasureVector {
    std::array<std::optional<double>, kMeasureCount> values{};
    bool binarization_degenerate = false;
    bool fractal_degenerate = false;
    double strong_threshold = 0.0;  ///< morphological binarization thresholds
    double weak_threshold = 0.0;
    std::vector<std::string> warnings;

    std::optional<double>& operator[](Measure m) { return values[static_cast<std::size_t>(m)]; }
    const std::optional<double>& operator[](Measure m) const {
        return values[static_cast<std::size_t>(m)];
    }
    bool operator==(const MeasureVector&) const = default;
};

// Histogram measures.
double entropy(const Histogram& hist);
double energy(const Histogram& hist);
double entropy(const GrayImage& img, std::size_t bins = kDefaultBins);
double energy(const GrayImage& img, std::size_t bins = kDefaultBins);

/// 8-connected foreground components and 4-connected background holes
/// (background regions not connected to the image frame).
struct Topology {
    std::size_t components = 0;
    std::size_t holes = 0;
    bool degenerate = false;
    double strong_threshold = 0.0;  ///< hysteresis thresholds when binarized here
    double weak_threshold = 0.0;
    double contours() const { return static_cast<double>(components + holes); }
    double euler() const {
        return static_cast<double>(components) - static_cast<double>(holes);
    }
};
Topology topology(const BinaryImage& mask);
Topology topology(const GrayImage& img);  ///< after morphological_binarize

/// Closed boundary curves: components + holes.
double contours(const GrayImage& img);
/// components - holes.
double euler(const GrayImage& img);

/// LZW size of the raw 8-bit bytes over width*height.
double algorithmic_complexity(const GrayImage& img);
double compression_ratio(std::span<const std::uint8_t> bytes);
double structural_complexity(const GrayImage& img, const StructuralParams& params = {});
/// RMS(i, f(i)) * s(f(i)) / s(i) with s(i) = width*height.
double mc_complexity(const GrayImage& img, const codec::LossyCodecParams& params = {});
double mc_complexity_edges(const GrayImage& img, const codec::LossyCodecParams& params = {});

struct BoxCount {
    std::size_t box_size;
    double occupied;  ///< averaged over grid offsets when enabled
};

struct FractalResult {
    double dimension = 0.0;
    bool degenerate = false;  ///< empty foreground
    std::vector<BoxCount> counts;
};

/// Box-counting dimension of a foreground mask. Box sizes are 2, 4, 8, ...
/// up to min(w,h)/2 with the grid anchored at the origin (partial cells
/// count). Throws InvalidInput when fewer than four sizes fit.
FractalResult box_counting_dimension(const BinaryImage& mask, bool offset_averaging = false);
FractalResult fractal_dimension(const GrayImage& img,
                                const AdaptiveBinarizationParams& binarization = {},
                                bool offset_averaging = false);

double fractal_aesthetic(double dimension, const FractalAestheticParams& params = {});
double fractal_aesthetic(const GrayImage& img, const FractalAestheticParams& params = {},
                         const AdaptiveBinarizationParams& binarization = {});

/// Third standardized moment over raw pixels. Throws UndefinedValue for a
/// constant image.
double skew(const GrayImage& img);

/// Every measure with shared intermediates. Per-measure failures become
/// missing values plus a warning; never throws for a valid image and config.
MeasureVector measure_all(const GrayImage& img, const MeasureConfig& config = {});

}  // namespace imgcx
