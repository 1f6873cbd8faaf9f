#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "imgcx/config.hpp"
#include "imgcx/corpus.hpp"
#include "imgcx/stats.hpp"

namespace imgcx::report {

/// Name of the score variable appended after the eleven measures.
inline constexpr const char* kScoreName = "Sc";

/// S, E, T, gamma, C_a, C_s, C_mc, C_mc_E, D, D_a, skew, Sc
std::vector<std::string> variable_names();

/// Rows that were included and measured successfully.
std::size_t usable_rows(const corpus::CorpusRun& run);

/// Correlations over usable rows, pairwise-complete per cell.
stats::CorrelationMatrix correlate_run(const corpus::CorpusRun& run);

struct TopMeasure {
    Measure measure;
    double r;
    double p;
    std::size_t n;
};

/// Measure with the largest |r| against Sc. Skew only competes when asked.
std::optional<TopMeasure> top_measure(const stats::CorrelationMatrix& m, bool include_skew);

/// Formats a value for tables: %.10g, or NA when missing.
std::string format_value(const std::optional<double>& v);

/// One row per record, plot-ready: path, score, status, the eleven measures,
/// degeneracy flags and binarization thresholds.
std::string measures_csv(const corpus::CorpusRun& run);
std::string measures_json(const corpus::CorpusRun& run);

/// Single-image output for the measure subcommand.
std::string measure_vector_csv(const MeasureVector& mv);
/// Exactly eleven keys, null for missing values.
std::string measure_vector_json(const MeasureVector& mv);

struct CorrelationReport {
    corpus::CorpusRun run;
    stats::CorrelationMatrix matrix;
    std::optional<TopMeasure> top;
};

/// Throws DataError when fewer than three usable records remain.
CorrelationReport build_report(corpus::CorpusRun run, const RunConfig& config);

std::string summary_json(const CorrelationReport& report, const RunConfig& config,
                         corpus::Dataset dataset);

/// Writes measures.{csv|json}, correlation.csv, correlation.json and
/// summary.json into `dir`, creating it when needed. Returns the paths.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir,
                                                const CorrelationReport& report,
                                                const RunConfig& config, corpus::Dataset dataset);

}  // namespace imgcx::report
