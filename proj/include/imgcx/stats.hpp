#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace imgcx::stats {

/// Sample Pearson r with a two-pass (mean, then co-moments) evaluation.
/// Throws InvalidInput on a length mismatch or n < 3 and UndefinedValue
/// when either vector is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Two-tailed p-value of r under H0: rho = 0, using Student's t with
/// n - 2 degrees of freedom. Returns 0 for |r| = 1.
double p_value(double r, std::size_t n);

/// Symmetric matrix of pairwise-complete Pearson correlations.
struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<std::optional<double>> r;  ///< row-major, size names^2
    std::vector<std::optional<double>> p;
    std::vector<std::size_t> n;            ///< complete pairs used per cell

    std::size_t size() const noexcept { return names.size(); }
    const std::optional<double>& r_at(std::size_t i, std::size_t j) const { return r[i * size() + j]; }
    const std::optional<double>& p_at(std::size_t i, std::size_t j) const { return p[i * size() + j]; }
    std::size_t n_at(std::size_t i, std::size_t j) const { return n[i * size() + j]; }
    std::optional<std::size_t> index_of(const std::string& name) const;
};

using Column = std::vector<std::optional<double>>;

/// Each cell uses the rows where both columns are present. Cells with fewer
/// than three complete pairs, or a constant side, are missing.
CorrelationMatrix correlation_matrix(const std::vector<std::string>& names,
                                     const std::vector<Column>& columns);

/// Lower-triangular layout, one row per variable: label, r[i][0..i].
std::string to_csv(const CorrelationMatrix& m);
/// {"names": [...], "r": [[...]], "p": [[...]], "n": [[...]]}, null for missing.
std::string to_json(const CorrelationMatrix& m);

}  // namespace imgcx::stats
