#include "sigid/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "sigid/kernels.hpp"

namespace sigid {

bool operator==(const FeatureVector& a, const FeatureVector& b) {
    return a.values == b.values;
}

namespace {

constexpr std::array<std::string_view, kGlobalFeatureCount> kGlobalNames = {
    "width",
    "height",
    "aspect_ratio",
    "hproj_support_binary",
    "hproj_support_thinned",
    "vproj_support_binary",
    "vproj_support_thinned",
    "area_binary",
    "area_thinned",
    "area_hpr",
    "narea_binary",
    "narea_thinned",
    "narea_hpr",
    "cog_x",
    "cog_y",
    "vproj_smooth_max",
    "vproj_smooth_min",
    "hproj_smooth_max",
    "hproj_smooth_min",
    "global_baseline",
    "upper_edge_limit",
    "lower_edge_limit",
    "middle_zone",
};

constexpr std::array<std::string_view, kLocalFeaturesPerCell> kCellSuffixes = {
    "area_binary", "narea_binary", "cog_x_rel", "cog_y_rel", "area_thinned", "area_hpr",
};

std::array<std::string, kFeatureCount> build_names() {
    std::array<std::string, kFeatureCount> names;
    for (int i = 0; i < kGlobalFeatureCount; ++i) names[i] = kGlobalNames[i];
    for (int c = 0; c < kGridRows * kGridCols; ++c) {
        for (int f = 0; f < kLocalFeaturesPerCell; ++f) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "cell%02d_%s", c,
                          std::string(kCellSuffixes[f]).c_str());
            names[kGlobalFeatureCount + c * kLocalFeaturesPerCell + f] = buf;
        }
    }
    return names;
}

const std::array<std::string, kFeatureCount>& name_storage() {
    static const auto names = build_names();
    return names;
}

// Cell boundaries: equal-sized cells, the last row/column absorbs the
// remainder pixels.
std::array<int, kGridCols + 1> cell_edges(int extent, int cells) {
    std::array<int, kGridCols + 1> edges{};
    const int base = extent / cells;
    for (int i = 0; i < cells; ++i) edges[i] = i * base;
    edges[cells] = extent;
    return edges;
}

double clamp01_ratio(double num, double den) {
    if (den <= 0.0) return 0.0;
    return std::min(1.0, num / den);
}

}  // namespace

const std::array<std::string_view, kFeatureCount>& feature_names() {
    static const auto views = [] {
        std::array<std::string_view, kFeatureCount> v;
        const auto& storage = name_storage();
        for (int i = 0; i < kFeatureCount; ++i) v[i] = storage[i];
        return v;
    }();
    return views;
}

int feature_index(std::string_view name) {
    static const auto index = [] {
        std::map<std::string_view, int> m;
        const auto& names = feature_names();
        for (int i = 0; i < kFeatureCount; ++i) m[names[i]] = i;
        return m;
    }();
    const auto it = index.find(name);
    return it == index.end() ? -1 : it->second;
}

Projection projection(const BinaryImage& bin, Axis axis) {
    Projection p;
    p.axis = axis;
    if (axis == Axis::horizontal) {
        p.counts.resize(static_cast<std::size_t>(std::max(0, bin.height)));
        for (int y = 0; y < bin.height; ++y) {
            const auto* row = &bin.ink[static_cast<std::size_t>(y) * bin.width];
            p.counts[y] = static_cast<std::uint32_t>(
                kernels::count_nonzero({row, static_cast<std::size_t>(bin.width)}));
        }
    } else {
        p.counts.assign(static_cast<std::size_t>(std::max(0, bin.width)), 0);
        for (int y = 0; y < bin.height; ++y) {
            const auto* row = &bin.ink[static_cast<std::size_t>(y) * bin.width];
            kernels::add_u8_to_u32({row, static_cast<std::size_t>(bin.width)}, p.counts);
        }
    }
    return p;
}

Projection smooth(const Projection& p, int window) {
    if (window < 3 || window % 2 == 0)
        raise(Errc::bad_window, "smooth: window must be odd and >= 3, got " +
                                    std::to_string(window));
    Projection out;
    out.axis = p.axis;
    const int n = static_cast<int>(p.counts.size());
    out.counts.resize(p.counts.size());
    const int r = window / 2;
    for (int i = 0; i < n; ++i) {
        long long sum = 0;
        for (int j = i - r; j <= i + r; ++j) sum += p.counts[std::clamp(j, 0, n - 1)];
        out.counts[i] = static_cast<std::uint32_t>(
            std::llround(static_cast<double>(sum) / window));
    }
    return out;
}

InkExtent ink_extent(const Projection& p, int min_count) {
    InkExtent e;
    const int n = static_cast<int>(p.counts.size());
    int lo = -1, hi = -1;
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(p.counts[i]) > min_count) {
            if (lo < 0) lo = i;
            hi = i;
        }
    }
    if (lo < 0) return e;
    e.lo = lo;
    e.hi = hi;
    e.span = hi - lo + 1;
    return e;
}

Point2d center_of_gravity(const BinaryImage& bin) {
    long long sx = 0, sy = 0, n = 0;
    for (int y = 0; y < bin.height; ++y) {
        const auto* row = &bin.ink[static_cast<std::size_t>(y) * bin.width];
        for (int x = 0; x < bin.width; ++x) {
            if (row[x]) {
                sx += x;
                sy += y;
                ++n;
            }
        }
    }
    if (n == 0) raise(Errc::no_ink, "center_of_gravity: no ink pixels");
    return {static_cast<double>(sx) / n, static_cast<double>(sy) / n};
}

int global_baseline(const BinaryImage& bin) {
    const Projection rows = projection(bin, Axis::horizontal);
    std::uint64_t total = 0;
    for (const auto c : rows.counts) total += c;
    if (total == 0) raise(Errc::no_ink, "global_baseline: no ink pixels");
    const std::uint64_t median_pos = (total + 1) / 2;  // lower median, 1-based
    std::uint64_t cum = 0;
    for (std::size_t r = 0; r < rows.counts.size(); ++r) {
        cum += rows.counts[r];
        if (cum >= median_pos) return static_cast<int>(r);
    }
    return static_cast<int>(rows.counts.size()) - 1;
}

EdgeLimits edge_limits(const BinaryImage& bin, int window) {
    const int b = global_baseline(bin);
    const Projection h = projection(bin, Axis::horizontal);
    const Projection s = smooth(h, window);

    EdgeLimits e;
    e.upper = b;
    e.lower = b;
    for (int r = 0; r < b; ++r) {
        if (s.counts[r] != h.counts[r]) {
            e.upper = r;
            break;
        }
    }
    for (int r = static_cast<int>(h.counts.size()) - 1; r > b; --r) {
        if (s.counts[r] != h.counts[r]) {
            e.lower = r;
            break;
        }
    }
    e.middle_zone = e.lower - e.upper;
    return e;
}

std::array<double, kGlobalFeatureCount> global_features(const SignatureViews& v,
                                                        const FeatureConfig& cfg) {
    const BinaryImage& bin = v.binary;
    if (bin.ink_count() == 0)
        raise(Errc::empty_signature, "global_features: binary view has no ink");

    const Projection hp_b = projection(bin, Axis::horizontal);
    const Projection vp_b = projection(bin, Axis::vertical);
    const Projection hp_t = projection(v.thinned, Axis::horizontal);
    const Projection vp_t = projection(v.thinned, Axis::vertical);

    const InkExtent col_extent = ink_extent(vp_b, cfg.extent_min_count);
    const InkExtent row_extent = ink_extent(hp_b, cfg.extent_min_count);
    const double width = col_extent.span;
    const double height = row_extent.span;

    const auto support = [](const Projection& p) {
        std::size_t n = 0;
        for (const auto c : p.counts) n += c > 0;
        return static_cast<double>(n);
    };

    const double area_binary = static_cast<double>(bin.ink_count());
    const double area_thinned = static_cast<double>(v.thinned.ink_count());
    const double area_hpr = static_cast<double>(v.hpr.ink_count());
    const double bbox = width * height;

    const Point2d cog = center_of_gravity(bin);

    const Projection vs = smooth(vp_b, cfg.proj_smooth_window);
    const Projection hs = smooth(hp_b, cfg.proj_smooth_window);
    const auto smooth_max = [](const Projection& p) {
        std::uint32_t m = 0;
        for (const auto c : p.counts) m = std::max(m, c);
        return static_cast<double>(m);
    };
    const auto smooth_min_in_extent = [](const Projection& p, const InkExtent& e) {
        if (e.span == 0) return 0.0;
        std::uint32_t m = p.counts[e.lo];
        for (int i = e.lo; i <= e.hi; ++i) m = std::min(m, p.counts[i]);
        return static_cast<double>(m);
    };

    const int baseline = global_baseline(bin);
    const EdgeLimits edges = edge_limits(bin, cfg.edge_window);

    return {
        width,
        height,
        height > 0.0 ? width / height : 0.0,
        support(hp_b),
        support(hp_t),
        support(vp_b),
        support(vp_t),
        area_binary,
        area_thinned,
        area_hpr,
        clamp01_ratio(area_binary, bbox),
        clamp01_ratio(area_thinned, bbox),
        clamp01_ratio(area_hpr, bbox),
        cog.x,
        cog.y,
        smooth_max(vs),
        smooth_min_in_extent(vs, col_extent),
        smooth_max(hs),
        smooth_min_in_extent(hs, row_extent),
        static_cast<double>(baseline),
        static_cast<double>(edges.upper),
        static_cast<double>(edges.lower),
        static_cast<double>(edges.middle_zone),
    };
}

std::array<double, kLocalFeatureCount> local_features(const SignatureViews& v) {
    const BinaryImage& bin = v.binary;
    if (bin.ink_count() == 0)
        raise(Errc::empty_signature, "local_features: binary view has no ink");

    const auto xs = cell_edges(bin.width, kGridCols);
    const auto ys = cell_edges(bin.height, kGridRows);

    std::array<double, kLocalFeatureCount> out{};
    int cell = 0;
    for (int gy = 0; gy < kGridRows; ++gy) {
        for (int gx = 0; gx < kGridCols; ++gx, ++cell) {
            const int x0 = xs[gx], x1 = xs[gx + 1];
            const int y0 = ys[gy], y1 = ys[gy + 1];
            const double cell_w = x1 - x0, cell_h = y1 - y0;

            long long area_b = 0, area_t = 0, area_h = 0, sx = 0, sy = 0;
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    if (bin.at(x, y)) {
                        ++area_b;
                        sx += x - x0;
                        sy += y - y0;
                    }
                    area_t += v.thinned.at(x, y) != 0;
                    area_h += v.hpr.at(x, y) != 0;
                }
            }

            double* f = &out[static_cast<std::size_t>(cell) * kLocalFeaturesPerCell];
            f[0] = static_cast<double>(area_b);
            f[1] = clamp01_ratio(static_cast<double>(area_b), cell_w * cell_h);
            if (area_b > 0) {
                f[2] = static_cast<double>(sx) / area_b;
                f[3] = static_cast<double>(sy) / area_b;
            } else {
                f[2] = cell_w / 2.0;
                f[3] = cell_h / 2.0;
            }
            f[4] = static_cast<double>(area_t);
            f[5] = static_cast<double>(area_h);
        }
    }
    return out;
}

FeatureVector extract(const SignatureViews& v, const FeatureConfig& cfg) {
    const auto globals = global_features(v, cfg);
    const auto locals = local_features(v);
    FeatureVector fv;
    std::copy(globals.begin(), globals.end(), fv.values.begin());
    std::copy(locals.begin(), locals.end(), fv.values.begin() + kGlobalFeatureCount);
    return fv;
}

}  // namespace sigid
