#include "sigid/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sigid/kernels.hpp"

namespace sigid {

GrayImage normalize_geometry(const GrayImage& img, int target_height) {
    if (img.empty()) raise(Errc::empty_image, "normalize_geometry: empty input");
    if (target_height < 8)
        raise(Errc::invalid_argument, "normalize_geometry: target height must be >= 8");

    const int out_h = target_height;
    const int out_w = std::max<int>(
        1, static_cast<int>(std::llround(static_cast<double>(img.width) * target_height /
                                         img.height)));

    GrayImage out;
    out.width = out_w;
    out.height = out_h;
    out.pixels.resize(static_cast<std::size_t>(out_w) * out_h);

    // Nearest neighbor on pixel centers.
    std::vector<int> src_x(out_w);
    for (int x = 0; x < out_w; ++x)
        src_x[x] = std::min(img.width - 1,
                            static_cast<int>((x + 0.5) * img.width / out_w));
    for (int y = 0; y < out_h; ++y) {
        const int sy = std::min(img.height - 1,
                                static_cast<int>((y + 0.5) * img.height / out_h));
        const std::uint8_t* src_row = &img.pixels[static_cast<std::size_t>(sy) * img.width];
        std::uint8_t* dst_row = &out.pixels[static_cast<std::size_t>(y) * out_w];
        for (int x = 0; x < out_w; ++x) dst_row[x] = src_row[src_x[x]];
    }
    return out;
}

GrayImage denoise(const GrayImage& img, DenoiseKind kind, int window) {
    if (img.empty()) raise(Errc::empty_image, "denoise: empty input");
    if (window < 3 || window % 2 == 0)
        raise(Errc::bad_window, "denoise: window must be odd and >= 3, got " +
                                    std::to_string(window));

    const int W = img.width, H = img.height, r = window / 2;
    GrayImage out = img;
    std::vector<std::uint8_t> buf;
    buf.reserve(static_cast<std::size_t>(window) * window);

    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            if (kind == DenoiseKind::mean) {
                long sum = 0;
                for (int dy = -r; dy <= r; ++dy) {
                    const int sy = std::clamp(y + dy, 0, H - 1);
                    for (int dx = -r; dx <= r; ++dx)
                        sum += img.at(std::clamp(x + dx, 0, W - 1), sy);
                }
                out.at(x, y) = static_cast<std::uint8_t>(
                    std::llround(static_cast<double>(sum) / (window * window)));
            } else {
                buf.clear();
                for (int dy = -r; dy <= r; ++dy) {
                    const int sy = std::clamp(y + dy, 0, H - 1);
                    for (int dx = -r; dx <= r; ++dx)
                        buf.push_back(img.at(std::clamp(x + dx, 0, W - 1), sy));
                }
                auto mid = buf.begin() + buf.size() / 2;
                std::nth_element(buf.begin(), mid, buf.end());
                out.at(x, y) = *mid;
            }
        }
    }
    return out;
}

std::array<std::uint32_t, 256> intensity_histogram(const GrayImage& img) {
    std::array<std::uint32_t, 256> hist{};
    for (const auto p : img.pixels) ++hist[p];
    return hist;
}

int otsu_threshold(const std::array<std::uint32_t, 256>& histogram) {
    std::uint64_t total = 0, moment = 0;
    int min_v = -1, max_v = -1;
    for (int v = 0; v < 256; ++v) {
        if (histogram[v] == 0) continue;
        total += histogram[v];
        moment += static_cast<std::uint64_t>(v) * histogram[v];
        if (min_v < 0) min_v = v;
        max_v = v;
    }
    if (total == 0) return 0;
    if (min_v == max_v) return min_v == 0 ? 0 : min_v - 1;

    double best = -1.0;
    int plateau_lo = min_v, plateau_hi = min_v;
    std::uint64_t w0 = 0, m0 = 0;
    for (int t = min_v; t < max_v; ++t) {
        w0 += histogram[t];
        m0 += static_cast<std::uint64_t>(t) * histogram[t];
        const std::uint64_t w1 = total - w0;
        const double mu0 = static_cast<double>(m0) / static_cast<double>(w0);
        const double mu1 = static_cast<double>(moment - m0) / static_cast<double>(w1);
        const double diff = mu0 - mu1;
        const double var = static_cast<double>(w0) * static_cast<double>(w1) * diff * diff;
        if (var > best) {
            best = var;
            plateau_lo = plateau_hi = t;
        } else if (var == best) {
            plateau_hi = t;
        }
    }
    return (plateau_lo + plateau_hi) / 2;
}

BinaryImage binarize(const GrayImage& img) {
    if (img.empty()) raise(Errc::empty_image, "binarize: empty input");
    const int t = otsu_threshold(intensity_histogram(img));
    BinaryImage out = BinaryImage::blank(img.width, img.height);
    kernels::threshold_le(img.pixels, static_cast<std::uint8_t>(t), out.ink);
    return out;
}

BinaryImage thin(const BinaryImage& bin) {
    BinaryImage img = bin;
    const int W = img.width, H = img.height;
    if (img.empty() || img.ink_count() == 0) return img;

    const auto at = [&](int x, int y) -> int {
        if (x < 0 || y < 0 || x >= W || y >= H) return 0;
        return img.ink[static_cast<std::size_t>(y) * W + x];
    };

    std::vector<std::size_t> kill;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            kill.clear();
            for (int y = 0; y < H; ++y) {
                for (int x = 0; x < W; ++x) {
                    if (!img.ink[static_cast<std::size_t>(y) * W + x]) continue;
                    const int p2 = at(x, y - 1), p3 = at(x + 1, y - 1), p4 = at(x + 1, y),
                              p5 = at(x + 1, y + 1), p6 = at(x, y + 1), p7 = at(x - 1, y + 1),
                              p8 = at(x - 1, y), p9 = at(x - 1, y - 1);
                    const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
                    if (b < 2 || b > 6) continue;
                    const int seq[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
                    int a = 0;
                    for (int i = 0; i < 8; ++i) a += (seq[i] == 0 && seq[i + 1] == 1);
                    if (a != 1) continue;
                    if (pass == 0) {
                        if ((p2 & p4 & p6) || (p4 & p6 & p8)) continue;
                    } else {
                        if ((p2 & p4 & p8) || (p2 & p6 & p8)) continue;
                    }
                    kill.push_back(static_cast<std::size_t>(y) * W + x);
                }
            }
            if (!kill.empty()) {
                changed = true;
                for (const auto i : kill) img.ink[i] = 0;
            }
        }
    }
    return img;
}

BinaryImage extract_hpr(const GrayImage& gray, double factor) {
    if (gray.empty()) raise(Errc::empty_image, "extract_hpr: empty input");
    if (!(factor > 0.0 && factor < 1.0))
        raise(Errc::invalid_argument, "extract_hpr: factor must be in (0,1)");

    BinaryImage out = BinaryImage::blank(gray.width, gray.height);
    std::uint8_t lo, hi;
    kernels::min_max_u8(gray.pixels, lo, hi);
    if (lo == hi) return out;

    const double threshold = lo + (1.0 - factor) * (hi - lo);
    kernels::threshold_le(gray.pixels, static_cast<std::uint8_t>(std::floor(threshold)),
                          out.ink);
    return out;
}

SignatureViews preprocess(const GrayImage& raw, const PreprocessConfig& cfg) {
    if (raw.empty()) raise(Errc::empty_image, "preprocess: empty input");

    const GrayImage normalized = normalize_geometry(raw, cfg.target_height);
    const GrayImage median = denoise(normalized, DenoiseKind::median, cfg.median_window);
    GrayImage gray = denoise(median, DenoiseKind::mean, cfg.mean_window);

    BinaryImage binary = binarize(gray);
    const std::size_t ink = binary.ink_count();
    if (ink < static_cast<std::size_t>(cfg.min_ink_pixels))
        raise(Errc::empty_signature, "preprocess: only " + std::to_string(ink) +
                                         " ink pixels after binarization (need " +
                                         std::to_string(cfg.min_ink_pixels) + ")");

    SignatureViews views;
    views.hpr = extract_hpr(gray, cfg.hpr_factor);
    views.thinned = thin(binary);
    views.binary = std::move(binary);
    views.gray = std::move(gray);
    return views;
}

}  // namespace sigid
