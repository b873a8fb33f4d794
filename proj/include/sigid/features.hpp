#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sigid/imaging.hpp"

namespace sigid {

inline constexpr int kGridRows = 5;
inline constexpr int kGridCols = 5;
inline constexpr int kGlobalFeatureCount = 23;
inline constexpr int kLocalFeaturesPerCell = 6;
inline constexpr int kLocalFeatureCount = kGridRows * kGridCols * kLocalFeaturesPerCell;
inline constexpr int kFeatureCount = kGlobalFeatureCount + kLocalFeatureCount;  // 173
inline constexpr std::string_view kFeatureSchemaId = "sigid-geom173-v1";

// horizontal = one bin per row, vertical = one bin per column
enum class Axis { horizontal, vertical };

struct Projection {
    Axis axis = Axis::horizontal;
    std::vector<std::uint32_t> counts;
};

struct InkExtent {
    int lo = 0;
    int hi = 0;
    int span = 0;
};

struct Point2d {
    double x = 0.0;
    double y = 0.0;
};

struct EdgeLimits {
    int upper = 0;
    int lower = 0;
    int middle_zone = 0;
};

// Fixed-order geometric descriptor: 23 global values followed by 6 values for
// each of the 25 grid cells (row-major cells).
struct FeatureVector {
    std::array<double, kFeatureCount> values{};

    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

bool operator==(const FeatureVector& a, const FeatureVector& b);

// Stable index -> name catalogue for CSV headers and JSON keys.
const std::array<std::string_view, kFeatureCount>& feature_names();
int feature_index(std::string_view name);  // -1 when unknown

struct FeatureConfig {
    int proj_smooth_window = 5;  // smoothed projection extrema
    int edge_window = 3;         // edge-limit detection
    int extent_min_count = 3;    // bins must exceed this count to extend width/height
};

Projection projection(const BinaryImage& bin, Axis axis);

// Moving average with edge replication, rounded to the nearest count.
Projection smooth(const Projection& p, int window);

// First/last bin holding more than min_count ink pixels. span==0 when none.
InkExtent ink_extent(const Projection& p, int min_count = 3);

// Mean ink coordinate; throws NoInk on an empty mask.
Point2d center_of_gravity(const BinaryImage& bin);

// Row of the median ink pixel (lower median on ties).
int global_baseline(const BinaryImage& bin);

// Rows above/below the baseline where the smoothed row projection first/last
// deviates from the raw one; falls back to the baseline row on either side.
EdgeLimits edge_limits(const BinaryImage& bin, int window);

std::array<double, kGlobalFeatureCount> global_features(const SignatureViews& v,
                                                        const FeatureConfig& cfg = {});
std::array<double, kLocalFeatureCount> local_features(const SignatureViews& v);

FeatureVector extract(const SignatureViews& v, const FeatureConfig& cfg = {});

}  // namespace sigid
