#include "imgcx/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "imgcx/errors.hpp"
#include "imgcx/image_io.hpp"

namespace fs = std::filesystem;

namespace imgcx::corpus {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    for (auto& f : fields) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
    }
    return fields;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

double parse_score(const std::string& text, long row) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw DataError("unparseable score '" + text + "'", row);
    }
}

std::string bits_hex(double v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
    return buf;
}

double hex_bits(const std::string& s) {
    if (s.size() != 16) throw std::invalid_argument("bad bit pattern");
    return std::bit_cast<double>(static_cast<std::uint64_t>(std::stoull(s, nullptr, 16)));
}

std::string line_checksum(const std::string& body) {
    return sha256_hex({reinterpret_cast<const std::uint8_t*>(body.data()), body.size()}).substr(0, 16);
}

std::string cache_key(const std::string& hash, const std::string& fingerprint) {
    return hash + ":" + fingerprint;
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

bool stem_matches(const std::string& stem, const std::string& id) {
    if (stem.size() < id.size() || stem.compare(0, id.size(), id) != 0) return false;
    if (stem.size() == id.size()) return true;
    const char sep = stem[id.size()];
    return sep == '_' || sep == '-' || sep == '.' || sep == ' ';
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

std::string_view dataset_name(Dataset d) {
    switch (d) {
        case Dataset::Lomas: return "lomas";
        case Dataset::Dla3d: return "dla3d";
        case Dataset::LineDrawing: return "linedrawing";
        case Dataset::Custom: return "custom";
    }
    return "custom";
}

Dataset parse_dataset(std::string_view tag) {
    for (Dataset d : {Dataset::Lomas, Dataset::Dla3d, Dataset::LineDrawing, Dataset::Custom}) {
        if (dataset_name(d) == tag) return d;
    }
    throw InvalidParameter("unknown dataset tag '" + std::string(tag) +
                           "' (expected lomas, dla3d, linedrawing or custom)");
}

void validate_record(CorpusRecord& r) {
    if (!std::isfinite(r.score)) throw DataError("score is not finite", r.row);
    switch (r.dataset) {
        case Dataset::Lomas:
            if (r.score != std::floor(r.score) || r.score < 0.0 || r.score > 10.0) {
                throw DataError("lomas score must be an integer in 0..10", r.row);
            }
            // 0 marks a form that failed to generate or was never rated.
            r.included = r.score != 0.0;
            break;
        case Dataset::LineDrawing:
            if (r.score < 0.0 || r.score > 1.0) {
                throw DataError("linedrawing score must lie in [0,1]", r.row);
            }
            break;
        case Dataset::Dla3d:
            if (r.score < 0.0) throw DataError("dla3d physical complexity must be >= 0", r.row);
            break;
        case Dataset::Custom:
            break;
    }
}

std::vector<CorpusRecord> parse_manifest(std::istream& in, Dataset dataset, const fs::path& base_dir) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty manifest");
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "path" || header[1] != "score" ||
        (header.size() > 2 && header[2] != "category") || header.size() > 3) {
        throw DataError("manifest header must be path,score[,category]", 0);
    }
    std::vector<CorpusRecord> records;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 2 || fields.size() > header.size()) {
            throw DataError("expected " + std::to_string(header.size()) + " fields, got " +
                                std::to_string(fields.size()),
                            row);
        }
        if (fields[0].empty()) throw DataError("empty image path", row);
        CorpusRecord rec;
        rec.row = row;
        rec.dataset = dataset;
        fs::path p(fields[0]);
        rec.image_path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
        rec.score = parse_score(fields[1], row);
        if (fields.size() > 2 && !fields[2].empty()) rec.category = fields[2];
        validate_record(rec);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<CorpusRecord> load_manifest(const fs::path& path, Dataset dataset) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest " + path.string());
    return parse_manifest(in, dataset, path.parent_path());
}

void write_manifest(std::ostream& out, const std::vector<CorpusRecord>& records, const fs::path& base_dir) {
    out << "path,score,category\n";
    for (const auto& r : records) {
        const fs::path p = base_dir.empty() ? r.image_path : r.image_path.lexically_relative(base_dir);
        char score[64];
        std::snprintf(score, sizeof score, "%.17g", r.score);
        out << csv_quote(p.generic_string()) << ',' << score << ',' << csv_quote(r.category.value_or(""))
            << '\n';
    }
}

std::vector<CorpusRecord> adapt_directory(const fs::path& image_dir, const fs::path& score_table,
                                          Dataset dataset, const AdapterOptions& options) {
    std::vector<fs::path> images;
    for (const auto& entry : fs::recursive_directory_iterator(image_dir)) {
        if (entry.is_regular_file() && is_image_file(entry.path())) images.push_back(entry.path());
    }
    std::sort(images.begin(), images.end());

    std::ifstream in(score_table);
    if (!in) throw DataError("cannot open score table " + score_table.string());
    std::string line;
    std::getline(in, line);
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "id" || header[1] != "score") {
        throw DataError("score table header must be id,score[,category]", 0);
    }
    const std::string preferred = options.orthographic ? "ortho" : "persp";

    std::vector<CorpusRecord> records;
    long row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 2) throw DataError("expected id,score", row);
        std::vector<fs::path> matches;
        for (const auto& img : images) {
            if (stem_matches(img.stem().string(), fields[0])) matches.push_back(img);
        }
        if (matches.empty()) throw DataError("no image found for id '" + fields[0] + "'", row);
        fs::path chosen = matches.front();
        if (matches.size() > 1 && dataset == Dataset::Dla3d) {
            const auto it = std::find_if(matches.begin(), matches.end(), [&](const fs::path& p) {
                return lower(p.string()).find(preferred) != std::string::npos;
            });
            if (it != matches.end()) chosen = *it;
        }
        CorpusRecord rec;
        rec.row = row;
        rec.dataset = dataset;
        rec.image_path = chosen;
        rec.score = parse_score(fields[1], row);
        if (fields.size() > 2 && !fields[2].empty()) rec.category = fields[2];
        validate_record(rec);
        records.push_back(std::move(rec));
    }
    return records;
}

std::string serialize_measures(const MeasureVector& mv) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (const auto& v : mv.values) {
        values.push_back(v ? nlohmann::ordered_json(bits_hex(*v)) : nlohmann::ordered_json(nullptr));
    }
    j["v"] = std::move(values);
    j["bd"] = mv.binarization_degenerate;
    j["fd"] = mv.fractal_degenerate;
    j["th"] = {bits_hex(mv.strong_threshold), bits_hex(mv.weak_threshold)};
    j["w"] = mv.warnings;
    return j.dump();
}

MeasureVector deserialize_measures(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    MeasureVector mv;
    const auto& values = j.at("v");
    if (values.size() != kMeasureCount) throw std::invalid_argument("wrong measure count");
    for (std::size_t i = 0; i < kMeasureCount; ++i) {
        if (!values[i].is_null()) mv.values[i] = hex_bits(values[i].get<std::string>());
    }
    mv.binarization_degenerate = j.at("bd").get<bool>();
    mv.fractal_degenerate = j.at("fd").get<bool>();
    mv.strong_threshold = hex_bits(j.at("th").at(0).get<std::string>());
    mv.weak_threshold = hex_bits(j.at("th").at(1).get<std::string>());
    mv.warnings = j.at("w").get<std::vector<std::string>>();
    return mv;
}

MeasureCache::MeasureCache(fs::path file) : file_(std::move(file)) {
    std::ifstream in(file_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        // hash \t fingerprint \t unix-seconds \t payload \t checksum
        const auto last_tab = line.rfind('\t');
        if (last_tab == std::string::npos) {
            if (!line.empty()) ++corrupt_;
            continue;
        }
        const std::string body = line.substr(0, last_tab);
        if (line_checksum(body) != line.substr(last_tab + 1)) {
            ++corrupt_;
            continue;
        }
        std::istringstream fields(body);
        std::string hash, fingerprint, stamp, payload;
        if (!std::getline(fields, hash, '\t') || !std::getline(fields, fingerprint, '\t') ||
            !std::getline(fields, stamp, '\t') || !std::getline(fields, payload)) {
            ++corrupt_;
            continue;
        }
        try {
            entries_[cache_key(hash, fingerprint)] = deserialize_measures(payload);
        } catch (const std::exception&) {
            ++corrupt_;
        }
    }
}

std::optional<MeasureVector> MeasureCache::find(const std::string& content_hash,
                                                const std::string& fingerprint) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(cache_key(content_hash, fingerprint));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void MeasureCache::store(const std::string& content_hash, const std::string& fingerprint,
                         const MeasureVector& measures) {
    std::lock_guard lock(mutex_);
    entries_[cache_key(content_hash, fingerprint)] = measures;
    if (file_.empty()) return;
    const auto now = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    const std::string body = content_hash + "\t" + fingerprint + "\t" + std::to_string(now) + "\t" +
                             serialize_measures(measures);
    std::ofstream out(file_, std::ios::app);
    if (!out) throw InvalidInput("cannot write cache file " + file_.string());
    // A torn previous write leaves a partial line; start on a fresh one.
    out << '\n' << body << '\t' << line_checksum(body) << '\n';
    out.flush();
}

std::size_t MeasureCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

CorpusRun run_corpus(const std::vector<CorpusRecord>& records, const RunConfig& config,
                     MeasureCache* cache) {
    config.validate();
    const std::string fingerprint = parameter_fingerprint(config.measures);

    CorpusRun run;
    run.rows.resize(records.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> hits{0}, computed{0}, failures{0}, decoded{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            CorpusRow& row = run.rows[i];
            row.record = records[i];
            if (!row.record.included) continue;
            try {
                const auto bytes = io::read_file(row.record.image_path);
                const std::string hash = sha256_hex(bytes);
                if (cache) {
                    if (auto hit = cache->find(hash, fingerprint)) {
                        row.measures = std::move(*hit);
                        row.cache_hit = true;
                        ++hits;
                        continue;
                    }
                }
                ++decoded;
                GrayImage img = io::decode_image(bytes);
                row.measures = measure_all(img, config.measures);
                ++computed;
                if (cache) cache->store(hash, fingerprint, *row.measures);
            } catch (const std::exception& e) {
                row.error = row.record.image_path.string() + ": " + e.what();
                row.measures.reset();
                ++failures;
            }
        }
    };

    const std::size_t threads = std::min(config.workers, std::max<std::size_t>(1, records.size()));
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    run.stats.records = records.size();
    run.stats.excluded = static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.included; }));
    run.stats.cache_hits = hits;
    run.stats.computed = computed;
    run.stats.failures = failures;
    run.stats.decoded = decoded;
    return run;
}

}  // namespace imgcx::corpus
