#pragma once

#include <array>
#include <cstdint>

#include "sigid/image.hpp"

namespace sigid {

struct PreprocessConfig {
    int target_height = 128;
    int median_window = 3;
    int mean_window = 3;
    double hpr_factor = 0.75;
    int min_ink_pixels = 10;
};

// The four canonical views every signature is reduced to before feature
// extraction. All views share the normalized frame dimensions.
struct SignatureViews {
    GrayImage gray;       // normalized and denoised
    BinaryImage binary;
    BinaryImage thinned;
    BinaryImage hpr;      // high-pressure (darkest ink) mask
};

enum class DenoiseKind { mean, median };

// Scales to target_height keeping the aspect ratio, nearest-neighbor.
GrayImage normalize_geometry(const GrayImage& img, int target_height);

// Window must be odd and >= 3; borders are edge-replicated.
GrayImage denoise(const GrayImage& img, DenoiseKind kind, int window);

std::array<std::uint32_t, 256> intensity_histogram(const GrayImage& img);

// Threshold maximizing between-class variance; ties resolved to the midpoint
// of the maximizing plateau. A single-level histogram thresholds to no ink
// unless that level is 0 (a fully black page is all ink).
int otsu_threshold(const std::array<std::uint32_t, 256>& histogram);

// Ink = pixels at or below the Otsu threshold.
BinaryImage binarize(const GrayImage& img);

// Zhang-Suen iterative thinning to a one-pixel skeleton. Idempotent.
BinaryImage thin(const BinaryImage& bin);

// High-pressure mask: pixels <= g_min + (1-factor)*(g_max-g_min); larger
// factors keep only the darkest strokes. Empty when the image is flat.
BinaryImage extract_hpr(const GrayImage& gray, double factor);

// normalize -> median -> mean -> {binarize, hpr}; thinning of the binary
// view. Throws EmptySignature when fewer than cfg.min_ink_pixels survive.
SignatureViews preprocess(const GrayImage& raw, const PreprocessConfig& cfg = {});

}  // namespace sigid
