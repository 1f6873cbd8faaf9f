#include "imgcx/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "imgcx/errors.hpp"

namespace imgcx::report {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

bool usable(const corpus::CorpusRow& row) {
    return row.record.included && row.measures.has_value();
}

std::string status(const corpus::CorpusRow& row) {
    if (!row.record.included) return "excluded";
    if (!row.error.empty()) return "failed";
    return "ok";
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

ojson opt_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out << text;
}

}  // namespace

std::vector<std::string> variable_names() {
    std::vector<std::string> names;
    for (Measure m : kAllMeasures) names.emplace_back(measure_name(m));
    names.emplace_back(kScoreName);
    return names;
}

std::size_t usable_rows(const corpus::CorpusRun& run) {
    return static_cast<std::size_t>(std::count_if(run.rows.begin(), run.rows.end(), usable));
}

stats::CorrelationMatrix correlate_run(const corpus::CorpusRun& run) {
    std::vector<stats::Column> columns(kMeasureCount + 1);
    for (const auto& row : run.rows) {
        if (!usable(row)) continue;
        for (std::size_t i = 0; i < kMeasureCount; ++i) columns[i].push_back(row.measures->values[i]);
        columns[kMeasureCount].push_back(row.record.score);
    }
    return stats::correlation_matrix(variable_names(), columns);
}

std::optional<TopMeasure> top_measure(const stats::CorrelationMatrix& m, bool include_skew) {
    const auto sc = m.index_of(kScoreName);
    if (!sc) return std::nullopt;
    std::optional<TopMeasure> best;
    for (Measure meas : kAllMeasures) {
        if (meas == Measure::Skew && !include_skew) continue;
        const auto i = m.index_of(std::string(measure_name(meas)));
        if (!i) continue;
        const auto& r = m.r_at(*sc, *i);
        if (!r) continue;
        if (!best || std::abs(*r) > std::abs(best->r)) {
            best = TopMeasure{meas, *r, m.p_at(*sc, *i).value_or(1.0), m.n_at(*sc, *i)};
        }
    }
    return best;
}

std::string format_value(const std::optional<double>& v) {
    if (!v) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

std::string measures_csv(const corpus::CorpusRun& run) {
    std::string out = "path,score,dataset,category,status";
    for (Measure m : kAllMeasures) out += "," + std::string(measure_name(m));
    out += ",binarization_degenerate,fractal_degenerate,t_hi,t_lo\n";
    for (const auto& row : run.rows) {
        const auto& r = row.record;
        out += csv_field(r.image_path.generic_string()) + "," + format_value(r.score) + "," +
               std::string(corpus::dataset_name(r.dataset)) + "," + csv_field(r.category.value_or("")) +
               "," + status(row);
        for (std::size_t i = 0; i < kMeasureCount; ++i) {
            out += "," + (row.measures ? format_value(row.measures->values[i]) : std::string("NA"));
        }
        if (row.measures) {
            out += std::string(",") + (row.measures->binarization_degenerate ? "1" : "0") + "," +
                   (row.measures->fractal_degenerate ? "1" : "0") + "," +
                   format_value(row.measures->strong_threshold) + "," +
                   format_value(row.measures->weak_threshold);
        } else {
            out += ",NA,NA,NA,NA";
        }
        out += "\n";
    }
    return out;
}

std::string measures_json(const corpus::CorpusRun& run) {
    ojson rows = ojson::array();
    for (const auto& row : run.rows) {
        ojson j;
        j["path"] = row.record.image_path.generic_string();
        j["score"] = row.record.score;
        j["dataset"] = std::string(corpus::dataset_name(row.record.dataset));
        j["category"] = row.record.category ? ojson(*row.record.category) : ojson(nullptr);
        j["status"] = status(row);
        if (!row.error.empty()) j["error"] = row.error;
        ojson values;
        for (Measure m : kAllMeasures) {
            values[std::string(measure_name(m))] =
                row.measures ? opt_json((*row.measures)[m]) : ojson(nullptr);
        }
        j["measures"] = std::move(values);
        rows.push_back(std::move(j));
    }
    return rows.dump(2) + "\n";
}

std::string measure_vector_csv(const MeasureVector& mv) {
    std::string header, values;
    for (Measure m : kAllMeasures) {
        if (!header.empty()) {
            header += ",";
            values += ",";
        }
        header += measure_name(m);
        values += format_value(mv[m]);
    }
    return header + "\n" + values + "\n";
}

std::string measure_vector_json(const MeasureVector& mv) {
    ojson j;
    for (Measure m : kAllMeasures) j[std::string(measure_name(m))] = opt_json(mv[m]);
    return j.dump(2) + "\n";
}

CorrelationReport build_report(corpus::CorpusRun run, const RunConfig& config) {
    if (usable_rows(run) < 3) {
        throw DataError("fewer than 3 usable records (" + std::to_string(usable_rows(run)) + ")");
    }
    CorrelationReport report;
    report.matrix = correlate_run(run);
    report.top = top_measure(report.matrix, config.include_skew);
    report.run = std::move(run);
    return report;
}

std::string summary_json(const CorrelationReport& report, const RunConfig& config,
                         corpus::Dataset dataset) {
    ojson j;
    j["format_version"] = 1;
    j["dataset"] = std::string(corpus::dataset_name(dataset));
    j["config"] = ojson::parse(config_json(config, -1));
    j["records"] = report.run.stats.records;
    j["excluded"] = report.run.stats.excluded;
    j["failures"] = report.run.stats.failures;
    j["usable"] = usable_rows(report.run);
    if (report.top) {
        j["top_measure"] = std::string(measure_name(report.top->measure));
        j["top_r"] = report.top->r;
        j["top_p"] = report.top->p;
        j["top_n"] = report.top->n;
    } else {
        j["top_measure"] = nullptr;
    }
    const auto& m = report.matrix;
    const std::size_t sc = *m.index_of(kScoreName);
    ojson against = ojson::object();
    for (Measure meas : kAllMeasures) {
        const std::size_t i = *m.index_of(std::string(measure_name(meas)));
        against[std::string(measure_name(meas))] = {
            {"r", opt_json(m.r_at(sc, i))}, {"p", opt_json(m.p_at(sc, i))}, {"n", m.n_at(sc, i)}};
    }
    j["correlation_with_score"] = std::move(against);
    ojson failed = ojson::array();
    for (const auto& row : report.run.rows) {
        if (!row.error.empty()) failed.push_back({{"row", row.record.row}, {"error", row.error}});
    }
    j["failed_records"] = std::move(failed);
    return j.dump(2) + "\n";
}

std::vector<fs::path> write_report(const fs::path& dir, const CorrelationReport& report,
                                   const RunConfig& config, corpus::Dataset dataset) {
    fs::create_directories(dir);
    std::vector<fs::path> written;
    const std::string header = "# imgcx " IMGCX_VERSION " config=" + config_json(config, -1) + "\n";
    if (config.format == OutputFormat::Json) {
        written.push_back(dir / "measures.json");
        ojson mj;
        mj["config"] = ojson::parse(config_json(config, -1));
        mj["rows"] = ojson::parse(measures_json(report.run));
        write_text(written.back(), mj.dump(2) + "\n");
    } else {
        written.push_back(dir / "measures.csv");
        write_text(written.back(), header + measures_csv(report.run));
    }
    written.push_back(dir / "correlation.csv");
    write_text(written.back(), header + stats::to_csv(report.matrix));
    written.push_back(dir / "correlation.json");
    ojson cj = ojson::parse(stats::to_json(report.matrix));
    cj["config"] = ojson::parse(config_json(config, -1));
    write_text(written.back(), cj.dump(2) + "\n");
    written.push_back(dir / "summary.json");
    write_text(written.back(), summary_json(report, config, dataset));
    return written;
}

}  // namespace imgcx::report
