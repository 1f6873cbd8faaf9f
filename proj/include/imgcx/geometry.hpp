#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace imgcx::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Closed polyline; a repeated first vertex at the end is accepted and ignored.
using Polyline = std::vector<Point>;

struct Layer {
    std::vector<Polyline> polylines;
};

/// A stack of z-layers, each a set of closed 2-D polylines.
struct LayeredForm {
    std::vector<Layer> layers;
    /// Throws InvalidInput when the form is empty, a layer has no polyline,
    /// or a polyline has fewer than three distinct vertices.
    void validate() const;
};

/// Vertices with the explicit closing duplicate and consecutive repeats removed.
Polyline distinct_vertices(const Polyline& line);

/// Absolute shoelace area.
double polygon_area(const Polyline& line);

/// Counter-clockwise convex hull (monotone chain), collinear points dropped.
std::vector<Point> convex_hull(std::span<const Point> points);

/// True when no two non-adjacent edges intersect.
bool is_simple(const Polyline& line);

struct ConvexityDeviation {
    double value = 0.0;  ///< 1 - area / hull area, in [0, 1)
    bool degenerate = false;
};

/// Polygon areas are summed; the hull is taken over all layer vertices.
/// A collinear layer (zero hull area) yields 0 with the degenerate flag.
ConvexityDeviation layer_convexity_deviation(const Layer& layer);

/// Absolute turn angles in degrees at every vertex of a closed polyline,
/// in (0, 180]; straight continuations (zero turn) are skipped.
std::vector<double> turn_angles(const Polyline& line);

/// Linear-interpolation quantile (R type 7) of an ascending sample.
double quantile(std::span<const double> sorted, double q);

/// (Q3 - Q1) / (Q3 + Q1); nullopt when Q3 + Q1 = 0.
std::optional<double> quartile_coefficient_of_dispersion(std::vector<double> values);

/// QCD of turn angles collected over every polyline of the layer.
/// Throws InvalidInput when the layer has fewer than four edges.
std::optional<double> layer_angle_qcd(const Layer& layer);

struct LayerScore {
    double convexity = 0.0;
    std::optional<double> angle_qcd;
    double score = 0.0;  ///< (convexity + qcd) / 2, or convexity alone when qcd is missing
    bool convexity_degenerate = false;
    std::vector<bool> simple;  ///< per polyline
};

struct PhysicalComplexity {
    double score = 0.0;  ///< mean of per-layer scores
    std::vector<LayerScore> layers;
    std::size_t layers_missing_qcd = 0;
};

PhysicalComplexity physical_complexity(const LayeredForm& form);

/// Text format: one polyline per line as whitespace-separated x y pairs,
/// layers separated by blank lines, '#' starts a comment line.
LayeredForm parse_layered_text(std::istream& in);
/// JSON: {"layers": [ [ [[x, y], ...], ... ], ... ]}
LayeredForm parse_layered_json(const std::string& text);
/// Picks the JSON parser when the first non-blank character is '{'.
LayeredForm load_layered_form(const std::filesystem::path& path);

}  // namespace imgcx::geometry
