#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "imgcx/config.hpp"
#include "imgcx/measures.hpp"

namespace imgcx::corpus {

enum class Dataset { Lomas, Dla3d, LineDrawing, Custom };

std::string_view dataset_name(Dataset d);
/// Accepts lomas, dla3d, linedrawing, custom. Throws InvalidParameter otherwise.
Dataset parse_dataset(std::string_view tag);

struct CorpusRecord {
    std::filesystem::path image_path;
    double score = 0.0;
    Dataset dataset = Dataset::Custom;
    std::optional<std::string> category;
    bool included = true;
    long row = 0;  ///< 1-based data row in the manifest
};

/// Applies the dataset's score convention: Lomas integers 0..10 with 0 marking
/// a failed or unrated form (kept, but excluded); Line Drawing scores in
/// [0,1]; DLA physical complexity finite and >= 0. Throws DataError.
void validate_record(CorpusRecord& record);

/// Manifest CSV with header `path,score[,category]`. Relative paths are
/// resolved against `base_dir`. Throws DataError carrying the row number.
std::vector<CorpusRecord> parse_manifest(std::istream& in, Dataset dataset,
                                         const std::filesystem::path& base_dir = {});
std::vector<CorpusRecord> load_manifest(const std::filesystem::path& path, Dataset dataset);

void write_manifest(std::ostream& out, const std::vector<CorpusRecord>& records,
                    const std::filesystem::path& base_dir = {});

/// Builds records from an image directory plus a score table `id,score[,category]`,
/// matching `id` against image file stems. For DLA forms, where each id has
/// several renders, the perspective render is chosen unless `orthographic`.
struct AdapterOptions {
    bool orthographic = false;
};
std::vector<CorpusRecord> adapt_directory(const std::filesystem::path& image_dir,
                                          const std::filesystem::path& score_table,
                                          Dataset dataset, const AdapterOptions& options = {});

/// Append-only single-file cache keyed by (content hash, parameter fingerprint).
/// Each line carries its own checksum; unreadable lines are ignored, so a
/// torn write costs a recompute, never a wrong value.
class MeasureCache {
public:
    MeasureCache() = default;
    explicit MeasureCache(std::filesystem::path file);

    std::optional<MeasureVector> find(const std::string& content_hash,
                                      const std::string& fingerprint) const;
    void store(const std::string& content_hash, const std::string& fingerprint,
               const MeasureVector& measures);

    std::size_t size() const;
    std::size_t corrupt_lines() const noexcept { return corrupt_; }
    const std::filesystem::path& file() const noexcept { return file_; }

private:
    std::filesystem::path file_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, MeasureVector> entries_;
    std::size_t corrupt_ = 0;
};

/// Cache line payload; doubles are stored by bit pattern.
std::string serialize_measures(const MeasureVector& mv);
MeasureVector deserialize_measures(const std::string& text);

struct CorpusRow {
    CorpusRecord record;
    std::optional<MeasureVector> measures;
    std::string error;  ///< non-empty on per-record failure
    bool cache_hit = false;
};

struct RunStats {
    std::size_t records = 0;
    std::size_t excluded = 0;
    std::size_t computed = 0;
    std::size_t cache_hits = 0;
    std::size_t failures = 0;
    std::size_t decoded = 0;
};

struct CorpusRun {
    std::vector<CorpusRow> rows;  ///< manifest order
    RunStats stats;
};

/// measure_all over every included record on a bounded worker pool. Failures
/// are recorded per row; the run itself only throws on an invalid config.
CorpusRun run_corpus(const std::vector<CorpusRecord>& records, const RunConfig& config,
                     MeasureCache* cache = nullptr);

}  // namespace imgcx::corpus
