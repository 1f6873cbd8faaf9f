#include "imgcx/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <json.hpp>

#include "imgcx/errors.hpp"

namespace imgcx::stats {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidInput("pearson: length mismatch");
    if (x.size() < 3) throw InvalidInput("pearson: need at least 3 samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedValue("pearson: constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double p_value(double r, std::size_t n) {
    if (n < 3) throw InvalidInput("p_value: need n >= 3");
    if (std::abs(r) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    // P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2), and df/(df+t^2) = 1 - r^2.
    const double x = 1.0 - r * r;
    return boost::math::ibeta(df / 2.0, 0.5, x);
}

std::optional<std::size_t> CorrelationMatrix::index_of(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

CorrelationMatrix correlation_matrix(const std::vector<std::string>& names,
                                     const std::vector<Column>& columns) {
    if (names.size() != columns.size()) throw InvalidInput("correlation_matrix: names/columns mismatch");
    const std::size_t k = names.size();
    const std::size_t rows = k ? columns.front().size() : 0;
    for (const auto& c : columns) {
        if (c.size() != rows) throw InvalidInput("correlation_matrix: ragged columns");
    }
    CorrelationMatrix m{names, std::vector<std::optional<double>>(k * k),
                        std::vector<std::optional<double>>(k * k), std::vector<std::size_t>(k * k, 0)};
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            xs.clear();
            ys.clear();
            for (std::size_t row = 0; row < rows; ++row) {
                if (columns[i][row] && columns[j][row]) {
                    xs.push_back(*columns[i][row]);
                    ys.push_back(*columns[j][row]);
                }
            }
            std::optional<double> r, p;
            if (xs.size() >= 3) {
                try {
                    if (i == j) {
                        pearson(xs, xs);  // a constant column has no diagonal either
                        r = 1.0;
                    } else {
                        r = pearson(xs, ys);
                    }
                    p = p_value(*r, xs.size());
                } catch (const UndefinedValue&) {
                    r.reset();
                    p.reset();
                }
            }
            for (const auto& [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
                m.r[a * k + b] = r;
                m.p[a * k + b] = p;
                m.n[a * k + b] = xs.size();
            }
        }
    }
    return m;
}

namespace {

std::string fmt(const std::optional<double>& v, const char* spec = "%.6f") {
    if (!v) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, *v);
    return buf;
}

}  // namespace

std::string to_csv(const CorrelationMatrix& m) {
    std::string out;
    for (const auto& name : m.names) out += "," + name;
    out += "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += m.names[i];
        for (std::size_t j = 0; j < m.size(); ++j) {
            out += ",";
            if (j <= i) out += fmt(m.r_at(i, j));
        }
        out += "\n";
    }
    return out;
}

std::string to_json(const CorrelationMatrix& m) {
    nlohmann::ordered_json doc;
    doc["names"] = m.names;
    auto grid = [&](auto getter) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < m.size(); ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (std::size_t j = 0; j < m.size(); ++j) row.push_back(getter(i, j));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    doc["r"] = grid([&](std::size_t i, std::size_t j) { return opt(m.r_at(i, j)); });
    doc["p"] = grid([&](std::size_t i, std::size_t j) { return opt(m.p_at(i, j)); });
    doc["n"] = grid([&](std::size_t i, std::size_t j) { return nlohmann::ordered_json(m.n_at(i, j)); });
    return doc.dump(2) + "\n";
}

}  // namespace imgcx::stats
