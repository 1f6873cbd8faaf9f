// imgcx: image complexity measures, corpus correlation reports and
// preprocessing previews.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "imgcx/codec.hpp"
#include "imgcx/config.hpp"
#include "imgcx/corpus.hpp"
#include "imgcx/errors.hpp"
#include "imgcx/geometry.hpp"
#include "imgcx/image_io.hpp"
#include "imgcx/measures.hpp"
#include "imgcx/preprocess.hpp"
#include "imgcx/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int cmd_measure(const std::string& image_path, const imgcx::RunConfig& config, bool verbose) {
    const auto img = imgcx::io::load_image(image_path);
    const auto mv = imgcx::measure_all(img, config.measures);
    for (const auto& w : mv.warnings) std::cerr << "warning: " << w << "\n";
    if (config.format == imgcx::OutputFormat::Json) {
        if (verbose) {
            nlohmann::ordered_json j = nlohmann::ordered_json::parse(imgcx::report::measure_vector_json(mv));
            j["binarization_degenerate"] = mv.binarization_degenerate;
            j["fractal_degenerate"] = mv.fractal_degenerate;
            j["t_hi"] = mv.strong_threshold;
            j["t_lo"] = mv.weak_threshold;
            j["config"] = nlohmann::ordered_json::parse(imgcx::config_json(config, -1));
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << imgcx::report::measure_vector_json(mv);
        }
    } else {
        std::cout << imgcx::report::measure_vector_csv(mv);
    }
    return kExitOk;
}

int cmd_correlate(const std::string& manifest, const std::string& tag, const std::string& out_dir,
                  const imgcx::RunConfig& config) {
    const auto dataset = imgcx::corpus::parse_dataset(tag);
    const auto records = imgcx::corpus::load_manifest(manifest, dataset);

    std::optional<imgcx::corpus::MeasureCache> cache;
    if (!config.cache_path.empty()) cache.emplace(config.cache_path);
    auto run = imgcx::corpus::run_corpus(records, config, cache ? &*cache : nullptr);

    const auto& st = run.stats;
    std::cerr << "records=" << st.records << " excluded=" << st.excluded << " computed=" << st.computed
              << " cache_hits=" << st.cache_hits << " failures=" << st.failures << "\n";
    for (const auto& row : run.rows) {
        if (!row.error.empty()) std::cerr << "warning: row " << row.record.row << ": " << row.error << "\n";
    }

    const auto report = imgcx::report::build_report(std::move(run), config);
    const auto files = imgcx::report::write_report(out_dir, report, config, dataset);
    for (const auto& f : files) std::cout << f.string() << "\n";
    if (report.top) {
        std::cout << "top measure: " << imgcx::measure_name(report.top->measure)
                  << " r=" << imgcx::report::format_value(report.top->r)
                  << " p=" << imgcx::report::format_value(report.top->p) << " n=" << report.top->n
                  << "\n";
    }
    return kExitOk;
}

int cmd_preview(const std::string& image_path, const std::string& stage, const std::string& out,
                const imgcx::RunConfig& config, int radius) {
    const auto img = imgcx::io::load_image(image_path);
    imgcx::GrayImage result;
    if (stage == "morph-binarize") {
        const auto bin = imgcx::morphological_binarize(img);
        if (bin.degenerate) std::cerr << "warning: degenerate binarization (constant image)\n";
        std::cerr << "t_hi=" << bin.strong_threshold << " t_lo=" << bin.weak_threshold << "\n";
        result = bin.mask.to_gray();
    } else if (stage == "adaptive-binarize") {
        result = imgcx::adaptive_binarize(img, imgcx::AdaptiveBinarizationParams{radius}).to_gray();
    } else if (stage == "sobel") {
        result = imgcx::sobel_edges(img);
    } else if (stage == "coarse-grain") {
        result = imgcx::coarse_grain(img, config.measures.structural).to_gray();
    } else if (stage == "lossy-roundtrip") {
        const auto enc = imgcx::codec::lossy_encode(img, config.measures.lossy);
        std::cout << "encoded_size=" << enc.encoded_size << " rms="
                  << imgcx::report::format_value(imgcx::codec::rms_error(img, enc.reconstruction))
                  << "\n";
        result = enc.reconstruction;
    } else {
        throw UsageError("unknown stage '" + stage + "'");
    }
    imgcx::io::write_png(result, out);
    return kExitOk;
}

int cmd_physical(const std::string& path, imgcx::OutputFormat format) {
    const auto form = imgcx::geometry::load_layered_form(path);
    const auto pc = imgcx::geometry::physical_complexity(form);
    using imgcx::report::format_value;
    if (format == imgcx::OutputFormat::Json) {
        nlohmann::ordered_json j;
        j["score"] = pc.score;
        j["layers_missing_qcd"] = pc.layers_missing_qcd;
        nlohmann::ordered_json layers = nlohmann::ordered_json::array();
        for (const auto& l : pc.layers) {
            layers.push_back({{"convexity", l.convexity},
                              {"angle_qcd", l.angle_qcd ? nlohmann::ordered_json(*l.angle_qcd)
                                                        : nlohmann::ordered_json(nullptr)},
                              {"score", l.score},
                              {"convexity_degenerate", l.convexity_degenerate},
                              {"simple", l.simple}});
        }
        j["layers"] = std::move(layers);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "layer,convexity,angle_qcd,score\n";
        for (std::size_t i = 0; i < pc.layers.size(); ++i) {
            const auto& l = pc.layers[i];
            std::cout << i << "," << format_value(l.convexity) << "," << format_value(l.angle_qcd)
                      << "," << format_value(l.score) << "\n";
        }
        std::cout << "total,,," << format_value(pc.score) << "\n";
    }
    return kExitOk;
}

int cmd_manifest(const std::string& image_dir, const std::string& scores, const std::string& tag,
                 const std::string& out, bool orthographic) {
    const auto dataset = imgcx::corpus::parse_dataset(tag);
    const auto records =
        imgcx::corpus::adapt_directory(image_dir, scores, dataset, {orthographic});
    const std::filesystem::path out_path(out);
    std::ofstream file(out_path);
    if (!file) throw imgcx::InvalidInput("cannot write " + out);
    const auto base = std::filesystem::absolute(out_path).parent_path();
    std::vector<imgcx::corpus::CorpusRecord> rel = records;
    for (auto& r : rel) r.image_path = std::filesystem::absolute(r.image_path);
    imgcx::corpus::write_manifest(file, rel, base);
    std::cerr << records.size() << " records written to " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Image complexity measures and aesthetic-score correlation reports", "imgcx"};
    app.set_version_flag("--version", IMGCX_VERSION);
    app.set_config("--config", "", "key=value file merged under command-line flags");
    app.require_subcommand(1);

    imgcx::RunConfig config;
    auto& m = config.measures;
    std::string format = "csv";
    bool eta_lightness = false;

    app.add_option("--rcg", m.structural.coarse_radius, "coarse-grain radius (pixels)")
        ->capture_default_str();
    app.add_option("--delta", m.structural.delta, "trinarization threshold in [0,0.5]")
        ->capture_default_str();
    app.add_flag("--eta-lightness", eta_lightness,
                 "coarse-grain on mean intensity instead of mean darkness");
    app.add_option("--fractal-radius", m.fractal_binarization.radius,
                   "adaptive binarization radius for D and D_a")
        ->capture_default_str();
    app.add_flag("--box-offsets", m.box_offset_averaging, "average box counts over 4 grid offsets");
    app.add_option("--quality", m.lossy.quality, "lossy codec quality in (0,1]")->capture_default_str();
    app.add_option("--fa-peak", m.aesthetic.peak, "preferred fractal dimension")->capture_default_str();
    app.add_option("--fa-sigma", m.aesthetic.sigma, "width of the preference curve")
        ->capture_default_str();
    app.add_option("--bins", m.histogram_bins, "histogram bins for S and E")->capture_default_str();
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    auto* measure = app.add_subcommand("measure", "print all eleven measures for one image");
    measure->fallthrough();
    std::string image;
    bool verbose = false;
    measure->add_option("image", image, "PNG or JPEG file")->required();
    measure->add_flag("--verbose", verbose, "include flags, thresholds and config (json only)");

    auto* correlate = app.add_subcommand("correlate", "measure a corpus and write correlation reports");
    correlate->fallthrough();
    std::string manifest, dataset_tag = "custom", out_dir = "report", cache_path;
    bool no_cache = false;
    correlate->add_option("manifest", manifest, "CSV with header path,score[,category]")->required();
    correlate->add_option("--dataset", dataset_tag, "lomas, dla3d, linedrawing or custom")
        ->check(CLI::IsMember({"lomas", "dla3d", "linedrawing", "custom"}))
        ->capture_default_str();
    correlate->add_option("--out", out_dir, "report directory")->capture_default_str();
    correlate->add_option("--workers", config.workers, "parallel workers")->capture_default_str();
    correlate->add_option("--cache", cache_path, "measure cache file")->envname(imgcx::kCacheEnvVar);
    correlate->add_flag("--no-cache", no_cache, "disable the persistent cache");
    correlate->add_flag("--include-skew", config.include_skew, "let skew compete for the top measure");

    auto* preview = app.add_subcommand("preview", "write an intermediate raster as PNG");
    preview->fallthrough();
    std::string stage, preview_out = "preview.png";
    int preview_radius = 2;
    preview->add_option("image", image, "PNG or JPEG file")->required();
    preview->add_option("stage", stage, "pipeline stage")
        ->required()
        ->check(CLI::IsMember(
            {"morph-binarize", "adaptive-binarize", "sobel", "coarse-grain", "lossy-roundtrip"}));
    preview->add_option("--out,-o", preview_out, "output PNG")->capture_default_str();
    preview->add_option("--r", preview_radius, "adaptive binarization radius")->capture_default_str();

    auto* physical = app.add_subcommand("physical", "physical complexity of a layered form");
    physical->fallthrough();
    std::string form_path;
    physical->add_option("form", form_path, "text or JSON layered geometry")->required();

    auto* make_manifest = app.add_subcommand("manifest", "build a manifest from a dataset directory");
    std::string image_dir, scores, manifest_out = "manifest.csv";
    bool orthographic = false;
    make_manifest->add_option("images", image_dir, "image directory")->required();
    make_manifest->add_option("scores", scores, "score table with header id,score[,category]")
        ->required();
    make_manifest->add_option("--dataset", dataset_tag, "dataset tag")
        ->check(CLI::IsMember({"lomas", "dla3d", "linedrawing", "custom"}));
    make_manifest->add_option("--out,-o", manifest_out, "manifest path")->capture_default_str();
    make_manifest->add_flag("--orthographic", orthographic, "use orthographic DLA renders");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        m.structural.darkness = !eta_lightness;
        config.format = format == "json" ? imgcx::OutputFormat::Json : imgcx::OutputFormat::Csv;
        if (!no_cache && !cache_path.empty()) config.cache_path = cache_path;
        config.validate();

        if (*measure) return cmd_measure(image, config, verbose);
        if (*correlate) return cmd_correlate(manifest, dataset_tag, out_dir, config);
        if (*preview) return cmd_preview(image, stage, preview_out, config, preview_radius);
        if (*physical) return cmd_physical(form_path, config.format);
        if (*make_manifest) {
            return cmd_manifest(image_dir, scores, dataset_tag, manifest_out, orthographic);
        }
    } catch (const imgcx::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
