#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ipa/util.hpp"

namespace ipa {

// Interleaved 8-bit raster, BGR channel order as decoded.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> pixels;  // row-major, width*height*channels

    std::uint8_t at(int x, int y, int c) const {
        return pixels[static_cast<std::size_t>((y * width + x) * channels + c)];
    }
    std::uint8_t& at(int x, int y, int c) {
        return pixels[static_cast<std::size_t>((y * width + x) * channels + c)];
    }
    bool same_pixels(const Image& other) const {
        return width == other.width && height == other.height && channels == other.channels &&
               pixels == other.pixels;
    }
};

// Codecs (PNG/JPEG bytes <-> raster).
Image decode_image(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> encode_png(const Image& img);
std::vector<unsigned char> encode_jpeg(const Image& img, int quality);

enum class PerturbationKind {
    gaussian_noise,
    gaussian_blur,
    downscale_resize,
    jpeg_recompress,
    center_crop,
};

const char* to_string(PerturbationKind k);
PerturbationKind perturbation_kind_from_string(const std::string& s);

// A spec fully determines the output: applying it twice to the same input
// yields identical bytes.
struct PerturbationSpec {
    PerturbationKind kind = PerturbationKind::gaussian_noise;
    double noise_sigma = 0.0;    // gaussian_noise
    int blur_radius = 0;         // gaussian_blur, px
    double scale = 1.0;          // downscale_resize, (0, 1)
    int jpeg_quality = 0;        // jpeg_recompress, 1..100
    double crop_fraction = 1.0;  // center_crop, (0, 1)
    std::uint64_t seed = 0;      // noise draw seed

    std::string summary() const;  // compact form embedded in provenance
    nlohmann::json to_json() const;
    static PerturbationSpec from_json(const nlohmann::json& j);
};

struct KindRange {
    bool enabled = true;
    double lo = 0.0;
    double hi = 0.0;
};

struct PerturbConfig {
    std::map<PerturbationKind, KindRange> ranges;

    static PerturbConfig defaults();
    std::vector<PerturbationKind> enabled_kinds() const;

    nlohmann::json to_json() const;
    static PerturbConfig from_json(const nlohmann::json& j);
};

// Kind chosen uniformly among enabled kinds; params drawn uniformly from the
// configured ranges. Throws ConfigError when every kind is disabled.
PerturbationSpec sample_perturbation(Rng& rng, const PerturbConfig& config);

// Applies the spec to a decoded raster. Non-resize kinds preserve dimensions.
// Throws DegenerateInputError when the image is smaller than the operator's
// minimum support, naming the violated constraint.
Image apply(const PerturbationSpec& spec, const Image& image);

}  // namespace ipa
