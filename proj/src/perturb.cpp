#include "ipa/perturb.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ipa {

// ---------------------------------------------------------------------------
// Codecs
// ---------------------------------------------------------------------------

static Image from_mat(const cv::Mat& mat) {
    Image img;
    img.width = mat.cols;
    img.height = mat.rows;
    img.channels = mat.channels();
    img.pixels.resize(static_cast<std::size_t>(mat.total()) * mat.channels());
    if (mat.isContinuous()) {
        std::copy(mat.data, mat.data + img.pixels.size(), img.pixels.begin());
    } else {
        for (int y = 0; y < mat.rows; ++y) {
            const auto* row = mat.ptr<std::uint8_t>(y);
            std::copy(row, row + static_cast<std::size_t>(mat.cols) * mat.channels(),
                      img.pixels.begin() + static_cast<std::size_t>(y) * mat.cols * mat.channels());
        }
    }
    return img;
}

static cv::Mat to_mat(const Image& img) {
    cv::Mat mat(img.height, img.width, img.channels == 1 ? CV_8UC1 : CV_8UC3);
    std::copy(img.pixels.begin(), img.pixels.end(), mat.data);
    return mat;
}

Image decode_image(const std::vector<unsigned char>& bytes) {
    cv::Mat mat = cv::imdecode(bytes, cv::IMREAD_COLOR);
    if (mat.empty()) throw DegenerateInputError("image bytes do not decode");
    return from_mat(mat);
}

std::vector<unsigned char> encode_png(const Image& img) {
    std::vector<unsigned char> out;
    if (!cv::imencode(".png", to_mat(img), out)) throw std::runtime_error("png encode failed");
    return out;
}

std::vector<unsigned char> encode_jpeg(const Image& img, int quality) {
    std::vector<unsigned char> out;
    std::vector<int> params{cv::IMWRITE_JPEG_QUALITY, quality};
    if (!cv::imencode(".jpg", to_mat(img), out, params)) {
        throw std::runtime_error("jpeg encode failed");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spec plumbing
// ---------------------------------------------------------------------------

const char* to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::gaussian_noise: return "gaussian_noise";
        case PerturbationKind::gaussian_blur: return "gaussian_blur";
        case PerturbationKind::downscale_resize: return "downscale_resize";
        case PerturbationKind::jpeg_recompress: return "jpeg_recompress";
        case PerturbationKind::center_crop: return "center_crop";
    }
    return "gaussian_noise";
}

PerturbationKind perturbation_kind_from_string(const std::string& s) {
    if (s == "gaussian_noise") return PerturbationKind::gaussian_noise;
    if (s == "gaussian_blur") return PerturbationKind::gaussian_blur;
    if (s == "downscale_resize") return PerturbationKind::downscale_resize;
    if (s == "jpeg_recompress") return PerturbationKind::jpeg_recompress;
    if (s == "center_crop") return PerturbationKind::center_crop;
    throw std::invalid_argument("unknown perturbation kind: " + s);
}

std::string PerturbationSpec::summary() const {
    char buf[96];
    switch (kind) {
        case PerturbationKind::gaussian_noise:
            std::snprintf(buf, sizeof buf, "gaussian_noise(sigma=%.3f,seed=%llu)", noise_sigma,
                          static_cast<unsigned long long>(seed));
            break;
        case PerturbationKind::gaussian_blur:
            std::snprintf(buf, sizeof buf, "gaussian_blur(radius=%d)", blur_radius);
            break;
        case PerturbationKind::downscale_resize:
            std::snprintf(buf, sizeof buf, "downscale_resize(scale=%.3f)", scale);
            break;
        case PerturbationKind::jpeg_recompress:
            std::snprintf(buf, sizeof buf, "jpeg_recompress(quality=%d)", jpeg_quality);
            break;
        case PerturbationKind::center_crop:
            std::snprintf(buf, sizeof buf, "center_crop(fraction=%.3f)", crop_fraction);
            break;
    }
    return buf;
}

nlohmann::json PerturbationSpec::to_json() const {
    return nlohmann::json{{"kind", to_string(kind)},
                          {"noise_sigma", noise_sigma},
                          {"blur_radius", blur_radius},
                          {"scale", scale},
                          {"jpeg_quality", jpeg_quality},
                          {"crop_fraction", crop_fraction},
                          {"seed", seed}};
}

PerturbationSpec PerturbationSpec::from_json(const nlohmann::json& j) {
    PerturbationSpec s;
    s.kind = perturbation_kind_from_string(j.at("kind").get<std::string>());
    s.noise_sigma = j.at("noise_sigma").get<double>();
    s.blur_radius = j.at("blur_radius").get<int>();
    s.scale = j.at("scale").get<double>();
    s.jpeg_quality = j.at("jpeg_quality").get<int>();
    s.crop_fraction = j.at("crop_fraction").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

PerturbConfig PerturbConfig::defaults() {
    PerturbConfig c;
    c.ranges[PerturbationKind::gaussian_noise] = {true, 10.0, 50.0};
    c.ranges[PerturbationKind::gaussian_blur] = {true, 2.0, 6.0};
    c.ranges[PerturbationKind::downscale_resize] = {true, 0.25, 0.5};
    c.ranges[PerturbationKind::jpeg_recompress] = {true, 10.0, 30.0};
    c.ranges[PerturbationKind::center_crop] = {true, 0.6, 0.85};
    return c;
}

std::vector<PerturbationKind> PerturbConfig::enabled_kinds() const {
    std::vector<PerturbationKind> out;
    for (const auto& [kind, range] : ranges) {
        if (range.enabled) out.push_back(kind);
    }
    return out;
}

nlohmann::json PerturbConfig::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [kind, range] : ranges) {
        j[to_string(kind)] =
            nlohmann::json{{"enabled", range.enabled}, {"lo", range.lo}, {"hi", range.hi}};
    }
    return j;
}

PerturbConfig PerturbConfig::from_json(const nlohmann::json& j) {
    PerturbConfig c = defaults();
    for (auto it = j.begin(); it != j.end(); ++it) {
        KindRange r;
        r.enabled = it.value().value("enabled", true);
        r.lo = it.value().at("lo").get<double>();
        r.hi = it.value().at("hi").get<double>();
        c.ranges[perturbation_kind_from_string(it.key())] = r;
    }
    return c;
}

PerturbationSpec sample_perturbation(Rng& rng, const PerturbConfig& config) {
    auto kinds = config.enabled_kinds();
    if (kinds.empty()) throw ConfigError("perturbation config enables no kinds");
    PerturbationKind kind = kinds[static_cast<std::size_t>(rng.below(kinds.size()))];
    const KindRange& range = config.ranges.at(kind);

    PerturbationSpec spec;
    spec.kind = kind;
    switch (kind) {
        case PerturbationKind::gaussian_noise:
            spec.noise_sigma = rng.uniform_range(range.lo, range.hi);
            spec.seed = rng.next();
            break;
        case PerturbationKind::gaussian_blur:
            spec.blur_radius = static_cast<int>(
                rng.int_range(static_cast<std::int64_t>(range.lo), static_cast<std::int64_t>(range.hi)));
            break;
        case PerturbationKind::downscale_resize:
            spec.scale = rng.uniform_range(range.lo, range.hi);
            break;
        case PerturbationKind::jpeg_recompress:
            spec.jpeg_quality = static_cast<int>(
                rng.int_range(static_cast<std::int64_t>(range.lo), static_cast<std::int64_t>(range.hi)));
            break;
        case PerturbationKind::center_crop:
            spec.crop_fraction = rng.uniform_range(range.lo, range.hi);
            break;
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

static std::uint8_t clamp_u8(long v) {
    return static_cast<std::uint8_t>(std::clamp<long>(v, 0, 255));
}

static Image apply_noise(const PerturbationSpec& spec, const Image& in) {
    Image out = in;
    Rng noise(spec.seed);
    for (auto& px : out.pixels) {
        long delta = std::lround(noise.normal(0.0, spec.noise_sigma));
        px = clamp_u8(static_cast<long>(px) + delta);
    }
    return out;
}

// Separable Gaussian with sigma = radius/2, kernel quantized to 16-bit fixed
// point so the convolution itself is pure integer arithmetic.
static std::vector<std::uint32_t> quantized_gaussian_kernel(int radius) {
    const double sigma = radius / 2.0;
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        w[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    const std::uint32_t scale = 1u << 16;
    std::vector<std::uint32_t> q(w.size());
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        q[i] = static_cast<std::uint32_t>(std::lround(w[i] / sum * scale));
        acc += q[i];
    }
    q[static_cast<std::size_t>(radius)] += scale - acc;  // weights sum exactly to 2^16
    return q;
}

static int reflect(int i, int n) {
    if (i < 0) return -i - 1;
    if (i >= n) return 2 * n - i - 1;
    return i;
}

static Image apply_blur(const PerturbationSpec& spec, const Image& in) {
    const int r = spec.blur_radius;
    if (r == 0) return in;
    if (2 * r + 1 > in.width || 2 * r + 1 > in.height) {
        throw DegenerateInputError("gaussian_blur kernel " + std::to_string(2 * r + 1) +
                                   "px exceeds image dimensions " + std::to_string(in.width) + "x" +
                                   std::to_string(in.height));
    }
    auto kernel = quantized_gaussian_kernel(r);

    // Horizontal pass into 32-bit accumulators (scaled by 2^16), vertical pass
    // back to 8 bits with a single rounding shift by 2^32.
    const int w = in.width;
    const int h = in.height;
    const int ch = in.channels;
    std::vector<std::uint32_t> tmp(static_cast<std::size_t>(w) * h * ch);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < ch; ++c) {
                std::uint64_t acc = 0;
                for (int k = -r; k <= r; ++k) {
                    acc += static_cast<std::uint64_t>(kernel[static_cast<std::size_t>(k + r)]) *
                           in.at(reflect(x + k, w), y, c);
                }
                tmp[static_cast<std::size_t>((y * w + x) * ch + c)] =
                    static_cast<std::uint32_t>(acc);
            }
        }
    }
    Image out = in;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < ch; ++c) {
                std::uint64_t acc = 0;
                for (int k = -r; k <= r; ++k) {
                    acc += static_cast<std::uint64_t>(kernel[static_cast<std::size_t>(k + r)]) *
                           tmp[static_cast<std::size_t>((reflect(y + k, h) * w + x) * ch + c)];
                }
                out.at(x, y, c) = static_cast<std::uint8_t>(
                    std::min<std::uint64_t>((acc + (1ull << 31)) >> 32, 255));
            }
        }
    }
    return out;
}

// Area-weighted average over the source box each output pixel covers.
static Image resize_area(const Image& in, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) {
        throw DegenerateInputError("resize target smaller than 1px");
    }
    Image out;
    out.width = out_w;
    out.height = out_h;
    out.channels = in.channels;
    out.pixels.resize(static_cast<std::size_t>(out_w) * out_h * in.channels);
    const double sx = static_cast<double>(in.width) / out_w;
    const double sy = static_cast<double>(in.height) / out_h;
    for (int oy = 0; oy < out_h; ++oy) {
        const double y0 = oy * sy;
        const double y1 = (oy + 1) * sy;
        for (int ox = 0; ox < out_w; ++ox) {
            const double x0 = ox * sx;
            const double x1 = (ox + 1) * sx;
            for (int c = 0; c < in.channels; ++c) {
                double acc = 0.0;
                double area = 0.0;
                for (int y = static_cast<int>(y0); y < static_cast<int>(std::ceil(y1)); ++y) {
                    const double wy =
                        std::min<double>(y + 1, y1) - std::max<double>(y, y0);
                    for (int x = static_cast<int>(x0); x < static_cast<int>(std::ceil(x1)); ++x) {
                        const double wx =
                            std::min<double>(x + 1, x1) - std::max<double>(x, x0);
                        acc += wx * wy * in.at(std::min(x, in.width - 1), std::min(y, in.height - 1), c);
                        area += wx * wy;
                    }
                }
                out.at(ox, oy, c) = clamp_u8(std::lround(acc / area));
            }
        }
    }
    return out;
}

// Bilinear upscale in 16.16 fixed point.
static Image resize_bilinear_fixed(const Image& in, int out_w, int out_h) {
    Image out;
    out.width = out_w;
    out.height = out_h;
    out.channels = in.channels;
    out.pixels.resize(static_cast<std::size_t>(out_w) * out_h * in.channels);
    const std::int64_t fx = (static_cast<std::int64_t>(in.width) << 16) / out_w;
    const std::int64_t fy = (static_cast<std::int64_t>(in.height) << 16) / out_h;
    for (int oy = 0; oy < out_h; ++oy) {
        std::int64_t syf = (oy * fy) + (fy >> 1) - (1 << 15);
        if (syf < 0) syf = 0;
        int y0 = static_cast<int>(syf >> 16);
        int y1 = std::min(y0 + 1, in.height - 1);
        std::int64_t wy = syf & 0xffff;
        for (int ox = 0; ox < out_w; ++ox) {
            std::int64_t sxf = (ox * fx) + (fx >> 1) - (1 << 15);
            if (sxf < 0) sxf = 0;
            int x0 = static_cast<int>(sxf >> 16);
            int x1 = std::min(x0 + 1, in.width - 1);
            std::int64_t wx = sxf & 0xffff;
            for (int c = 0; c < in.channels; ++c) {
                std::int64_t top = in.at(x0, y0, c) * (65536 - wx) + in.at(x1, y0, c) * wx;
                std::int64_t bot = in.at(x0, y1, c) * (65536 - wx) + in.at(x1, y1, c) * wx;
                std::int64_t v = top * (65536 - wy) + bot * wy;  // scaled by 2^32
                out.at(ox, oy, c) = static_cast<std::uint8_t>(
                    std::min<std::int64_t>((v + (1ll << 31)) >> 32, 255));
            }
        }
    }
    return out;
}

static Image apply_downscale(const PerturbationSpec& spec, const Image& in) {
    const int out_w = static_cast<int>(std::lround(in.width * spec.scale));
    const int out_h = static_cast<int>(std::lround(in.height * spec.scale));
    if (out_w < 1 || out_h < 1) {
        throw DegenerateInputError("downscale_resize scale " + std::to_string(spec.scale) +
                                   " collapses image below 1px");
    }
    return resize_area(in, out_w, out_h);
}

static Image apply_jpeg(const PerturbationSpec& spec, const Image& in) {
    auto bytes = encode_jpeg(in, spec.jpeg_quality);
    Image out = decode_image(bytes);
    return out;
}

static Image apply_crop(const PerturbationSpec& spec, const Image& in) {
    const int cw = static_cast<int>(std::lround(in.width * spec.crop_fraction));
    const int ch = static_cast<int>(std::lround(in.height * spec.crop_fraction));
    if (cw < 2 || ch < 2) {
        throw DegenerateInputError("center_crop fraction " + std::to_string(spec.crop_fraction) +
                                   " leaves crop below 2px");
    }
    const int x0 = (in.width - cw) / 2;
    const int y0 = (in.height - ch) / 2;
    Image crop;
    crop.width = cw;
    crop.height = ch;
    crop.channels = in.channels;
    crop.pixels.resize(static_cast<std::size_t>(cw) * ch * in.channels);
    for (int y = 0; y < ch; ++y) {
        for (int x = 0; x < cw; ++x) {
            for (int c = 0; c < in.channels; ++c) {
                crop.at(x, y, c) = in.at(x0 + x, y0 + y, c);
            }
        }
    }
    // Zoom back to the original dimensions.
    return resize_bilinear_fixed(crop, in.width, in.height);
}

Image apply(const PerturbationSpec& spec, const Image& image) {
    if (image.width < 1 || image.height < 1 || image.pixels.empty()) {
        throw DegenerateInputError("empty image");
    }
    switch (spec.kind) {
        case PerturbationKind::gaussian_noise: return apply_noise(spec, image);
        case PerturbationKind::gaussian_blur: return apply_blur(spec, image);
        case PerturbationKind::downscale_resize: return apply_downscale(spec, image);
        case PerturbationKind::jpeg_recompress: return apply_jpeg(spec, image);
        case PerturbationKind::center_crop: return apply_crop(spec, image);
    }
    throw std::logic_error("unreachable perturbation kind");
}

}  // namespace ipa
