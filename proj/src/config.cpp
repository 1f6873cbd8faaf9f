#include "imgcx/config.hpp"

#include <cstdio>

#include <json.hpp>
#include <openssl/evp.h>

#include "imgcx/errors.hpp"

namespace imgcx {

namespace {

std::string exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

}  // namespace

void RunConfig::validate() const {
    measures.validate();
    if (workers == 0) throw InvalidParameter("workers must be >= 1");
}

std::string canonical_parameters(const MeasureConfig& c) {
    std::string s;
    s += "codec=" + std::string(codec::kCodecVersion);
    s += ";luminance=" + std::string(kLuminanceConvention);
    s += ";bins=" + std::to_string(c.histogram_bins);
    s += ";rcg=" + std::to_string(c.structural.coarse_radius);
    s += ";delta=" + exact(c.structural.delta);
    s += ";eta=" + std::string(c.structural.darkness ? "darkness" : "lightness");
    s += ";fractal_r=" + std::to_string(c.fractal_binarization.radius);
    s += ";box_offsets=" + std::string(c.box_offset_averaging ? "4" : "1");
    s += ";fa_peak=" + exact(c.aesthetic.peak);
    s += ";fa_sigma=" + exact(c.aesthetic.sigma);
    s += ";quality=" + std::to_string(c.lossy.scaled_quality());
    return s;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xF]);
    }
    return out;
}

std::string parameter_fingerprint(const MeasureConfig& config) {
    const std::string text = canonical_parameters(config);
    return sha256_hex({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string config_json(const RunConfig& c, int indent) {
    nlohmann::ordered_json j;
    j["rcg"] = c.measures.structural.coarse_radius;
    j["delta"] = c.measures.structural.delta;
    j["eta_orientation"] = c.measures.structural.darkness ? "darkness" : "lightness";
    j["fractal_radius"] = c.measures.fractal_binarization.radius;
    j["box_offset_averaging"] = c.measures.box_offset_averaging;
    j["fa_peak"] = c.measures.aesthetic.peak;
    j["fa_sigma"] = c.measures.aesthetic.sigma;
    j["quality"] = c.measures.lossy.quality;
    j["histogram_bins"] = c.measures.histogram_bins;
    j["morph_binarization"] = "hysteresis(otsu, 0.5*otsu, 8-connected)";
    j["luminance"] = kLuminanceConvention;
    j["codec_version"] = std::string(codec::kCodecVersion);
    j["include_skew"] = c.include_skew;
    j["fingerprint"] = parameter_fingerprint(c.measures);
    return j.dump(indent);
}

}  // namespace imgcx
