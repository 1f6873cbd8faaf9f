#pragma once

#include <cstddef>
#include <vector>

#include "imgcx/image.hpp"

namespace imgcx {

struct AdaptiveBinarizationParams {
    int radius = 2;
    void validate() const;
};

/// Coarse-grain radius, trinarization threshold delta and the orientation of
/// the smoothed value eta. With `darkness` set, eta is the local mean of
/// (1 - intensity), so dark ink yields high eta.
struct StructuralParams {
    int coarse_radius = 5;
    double delta = 0.23;
    bool darkness = true;
    void validate() const;
};

struct MorphBinarization {
    BinaryImage mask;
    double strong_threshold = 0.0;  ///< Otsu threshold t_hi
    double weak_threshold = 0.0;    ///< 0.5 * t_hi
    bool degenerate = false;        ///< single occupied histogram bin
};

/// Otsu split on a histogram: the returned bin k separates bins <= k from
/// bins > k. When several splits share the maximal between-class variance
/// (empty bins between two modes) the middle of that plateau is taken.
/// Returns -1 when fewer than two bins are occupied.
int otsu_split(const Histogram& hist);

/// Hysteresis binarization over Otsu: strong pixels are those above the Otsu
/// split, weak pixels those >= half the strong threshold; a weak pixel is kept
/// only when 8-connected to a strong one. Degenerate (constant) images give
/// an all-background mask.
MorphBinarization morphological_binarize(const GrayImage& img);

/// Local mean and standard deviation over clamped (2r+1)x(2r+1) windows.
struct LocalStats {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> mean;
    std::vector<double> stddev;
};
LocalStats local_stats(const GrayImage& img, int radius);

/// 1 where the pixel is strictly above its clamped-window mean.
BinaryImage adaptive_binarize(const GrayImage& img, const AdaptiveBinarizationParams& params);

/// Sobel gradient magnitude with replicated borders, rescaled to max 1.
/// Throws InvalidInput for images smaller than 3x3.
GrayImage sobel_edges(const GrayImage& img);

/// Smoothed eta field (clamped box mean) used by coarse_grain.
std::vector<double> coarse_field(const GrayImage& img, const StructuralParams& params);

/// white if eta <= delta, grey if delta < eta <= 1 - delta, black otherwise.
TriLevelImage coarse_grain(const GrayImage& img, const StructuralParams& params);

}  // namespace imgcx
