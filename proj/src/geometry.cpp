#include "imgcx/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "imgcx/errors.hpp"

namespace imgcx::geometry {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool same(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }

int orientation(const Point& a, const Point& b, const Point& c) {
    const double v = cross(a, b, c);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
           (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

std::size_t edge_count(const Layer& layer) {
    std::size_t edges = 0;
    for (const auto& line : layer.polylines) edges += distinct_vertices(line).size();
    return edges;
}

}  // namespace

void LayeredForm::validate() const {
    if (layers.empty()) throw InvalidInput("layered form has no layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].polylines.empty()) {
            throw InvalidInput("layer " + std::to_string(i) + " has no polylines");
        }
        for (const auto& line : layers[i].polylines) {
            if (distinct_vertices(line).size() < 3) {
                throw InvalidInput("layer " + std::to_string(i) +
                                   " has a polyline with fewer than 3 vertices");
            }
        }
    }
}

Polyline distinct_vertices(const Polyline& line) {
    Polyline out;
    out.reserve(line.size());
    for (const auto& p : line) {
        if (out.empty() || !same(out.back(), p)) out.push_back(p);
    }
    while (out.size() > 1 && same(out.front(), out.back())) out.pop_back();
    return out;
}

double polygon_area(const Polyline& line) {
    const auto pts = distinct_vertices(line);
    if (pts.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % pts.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::abs(twice) / 2.0;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
    std::vector<Point> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(),
              [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), same), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool is_simple(const Polyline& line) {
    const auto pts = distinct_vertices(line);
    const std::size_t n = pts.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a1 = pts[i];
        const Point& a2 = pts[(i + 1) % n];
        for (std::size_t j = i + 1; j < n; ++j) {
            // Adjacent edges share a vertex by construction.
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(a1, a2, pts[j], pts[(j + 1) % n])) return false;
        }
    }
    return true;
}

ConvexityDeviation layer_convexity_deviation(const Layer& layer) {
    std::vector<Point> all;
    double area = 0.0;
    for (const auto& line : layer.polylines) {
        area += polygon_area(line);
        const auto pts = distinct_vertices(line);
        all.insert(all.end(), pts.begin(), pts.end());
    }
    const auto hull = convex_hull(all);
    const double hull_area = hull.size() >= 3 ? polygon_area(hull) : 0.0;

    double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    if (!all.empty()) {
        auto [lo_x, hi_x] = std::minmax_element(all.begin(), all.end(),
                                                [](auto& a, auto& b) { return a.x < b.x; });
        auto [lo_y, hi_y] = std::minmax_element(all.begin(), all.end(),
                                                [](auto& a, auto& b) { return a.y < b.y; });
        min_x = lo_x->x, max_x = hi_x->x, min_y = lo_y->y, max_y = hi_y->y;
    }
    const double extent = std::max(max_x - min_x, max_y - min_y);
    if (!(hull_area > 1e-12 * extent * extent)) return {0.0, true};
    return {std::clamp(1.0 - area / hull_area, 0.0, 1.0), false};
}

std::vector<double> turn_angles(const Polyline& line) {
    const auto pts = distinct_vertices(line);
    const std::size_t n = pts.size();
    std::vector<double> angles;
    if (n < 3) return angles;
    angles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& prev = pts[(i + n - 1) % n];
        const Point& cur = pts[i];
        const Point& next = pts[(i + 1) % n];
        const double ax = cur.x - prev.x, ay = cur.y - prev.y;
        const double bx = next.x - cur.x, by = next.y - cur.y;
        const double turn =
            std::atan2(std::abs(ax * by - ay * bx), ax * bx + ay * by) * 180.0 / std::numbers::pi;
        if (turn > 1e-9) angles.push_back(turn);
    }
    return angles;
}

double quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw InvalidInput("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::optional<double> quartile_coefficient_of_dispersion(std::vector<double> values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    const double q1 = quantile(values, 0.25);
    const double q3 = quantile(values, 0.75);
    if (q3 + q1 == 0.0) return std::nullopt;
    return (q3 - q1) / (q3 + q1);
}

std::optional<double> layer_angle_qcd(const Layer& layer) {
    if (edge_count(layer) < 4) throw InvalidInput("angle QCD needs at least 4 edges in a layer");
    std::vector<double> angles;
    for (const auto& line : layer.polylines) {
        const auto a = turn_angles(line);
        angles.insert(angles.end(), a.begin(), a.end());
    }
    return quartile_coefficient_of_dispersion(std::move(angles));
}

PhysicalComplexity physical_complexity(const LayeredForm& form) {
    form.validate();
    PhysicalComplexity result;
    double total = 0.0;
    for (const auto& layer : form.layers) {
        LayerScore ls;
        const auto conv = layer_convexity_deviation(layer);
        ls.convexity = conv.value;
        ls.convexity_degenerate = conv.degenerate;
        if (edge_count(layer) >= 4) ls.angle_qcd = layer_angle_qcd(layer);
        if (ls.angle_qcd) {
            ls.score = (ls.convexity + *ls.angle_qcd) / 2.0;
        } else {
            ls.score = ls.convexity;
            ++result.layers_missing_qcd;
        }
        for (const auto& line : layer.polylines) ls.simple.push_back(is_simple(line));
        total += ls.score;
        result.layers.push_back(std::move(ls));
    }
    result.score = total / static_cast<double>(form.layers.size());
    return result;
}

LayeredForm parse_layered_text(std::istream& in) {
    LayeredForm form;
    Layer current;
    std::string line;
    std::size_t line_no = 0;
    auto flush = [&] {
        if (!current.polylines.empty()) form.layers.push_back(std::move(current));
        current = Layer{};
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            flush();
            continue;
        }
        if (line[first] == '#') continue;
        std::istringstream fields(line);
        std::vector<double> values;
        std::string token;
        while (fields >> token) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(token, &used));
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw DataError("bad coordinate '" + token + "'", static_cast<long>(line_no));
            }
        }
        if (values.size() % 2 != 0) {
            throw DataError("odd number of coordinates", static_cast<long>(line_no));
        }
        Polyline poly;
        for (std::size_t i = 0; i < values.size(); i += 2) poly.push_back({values[i], values[i + 1]});
        current.polylines.push_back(std::move(poly));
    }
    flush();
    form.validate();
    return form;
}

LayeredForm parse_layered_json(const std::string& text) {
    LayeredForm form;
    try {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& jl : doc.at("layers")) {
            Layer layer;
            for (const auto& jp : jl) {
                Polyline poly;
                for (const auto& v : jp) poly.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                layer.polylines.push_back(std::move(poly));
            }
            form.layers.push_back(std::move(layer));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("layered form JSON: ") + e.what());
    }
    form.validate();
    return form;
}

LayeredForm load_layered_form(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_layered_json(text);
    std::istringstream stream(text);
    return parse_layered_text(stream);
}

}  // namespace imgcx::geometry
