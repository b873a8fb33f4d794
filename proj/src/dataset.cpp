#include "sigid/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sigid/rng.hpp"

namespace sigid {

namespace {

constexpr std::uint64_t kStreamSubjectModel = 0x01;
constexpr std::uint64_t kStreamGenuine = 0x02;
constexpr std::uint64_t kStreamForgery = 0x03;
constexpr std::uint64_t kStreamNoise = 0x04;

struct Vec2 {
    double x = 0.0, y = 0.0;
};

struct Stroke {
    std::vector<Vec2> anchors;
    double thickness = 2.5;
    double ink_base = 45.0;   // darkest value on the stroke
    double ink_amp = 40.0;    // pressure swing above ink_base
    double press_freq = 1.5;  // pressure cycles along the stroke
    double press_phase = 0.0;
};

struct HandModel {
    std::vector<Stroke> strokes;
};

// The per-subject signature shape: a main left-to-right scrawl, sometimes an
// underline or a short flourish, plus the subject's pen-pressure habits.
HandModel make_hand_model(Rng& rng, int w, int h) {
    HandModel model;
    const double mx = 0.10 * w, my = 0.22 * h;
    const double cy = h / 2.0;

    Stroke main;
    const int n = static_cast<int>(rng.range(7, 11));
    const double usable = w - 2.0 * mx;
    double y = cy + rng.uniform(-0.12, 0.12) * h;
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        Vec2 p;
        p.x = mx + usable * t + rng.uniform(-0.25, 0.25) * usable / (n - 1);
        const double swing = (h / 2.0 - my) * rng.uniform(0.35, 1.0);
        y += rng.normal(0.0, swing * 0.55);
        y = std::clamp(y, my, h - my);
        // occasional tall spike, like an ascender or a looping capital
        if (i > 0 && i < n - 1 && rng.chance(0.30))
            y = rng.chance(0.5) ? my + rng.uniform(0.0, 0.15) * h
                                : h - my - rng.uniform(0.0, 0.15) * h;
        p.y = y;
        main.anchors.push_back(p);
    }
    main.thickness = rng.uniform(2.0, 3.4);
    main.ink_base = rng.uniform(25.0, 70.0);
    main.ink_amp = rng.uniform(25.0, 60.0);
    main.press_freq = rng.uniform(0.8, 3.0);
    main.press_phase = rng.uniform(0.0, 6.2831853);
    model.strokes.push_back(std::move(main));

    if (rng.chance(0.4)) {
        Stroke underline;
        const double uy = h - my * rng.uniform(0.55, 0.95);
        underline.anchors = {{mx + rng.uniform(0.0, 0.1) * w, uy},
                             {w / 2.0 + rng.uniform(-0.1, 0.1) * w, uy + rng.uniform(-4.0, 4.0)},
                             {w - mx - rng.uniform(0.0, 0.1) * w, uy + rng.uniform(-6.0, 6.0)}};
        underline.thickness = rng.uniform(1.6, 2.6);
        underline.ink_base = rng.uniform(30.0, 75.0);
        underline.ink_amp = rng.uniform(20.0, 50.0);
        underline.press_freq = rng.uniform(0.5, 1.5);
        underline.press_phase = rng.uniform(0.0, 6.2831853);
        model.strokes.push_back(std::move(underline));
    }

    if (rng.chance(0.35)) {
        Stroke flourish;
        const double fx = mx + rng.uniform(0.05, 0.6) * usable;
        const double fy = cy + rng.uniform(-0.2, 0.2) * h;
        const double rad = rng.uniform(0.06, 0.14) * h;
        for (int i = 0; i < 5; ++i) {
            const double a = rng.uniform(0.0, 0.6) + i * 1.7;
            flourish.anchors.push_back({fx + rad * std::cos(a) * (1.0 + 0.3 * i),
                                        fy + rad * std::sin(a)});
        }
        flourish.thickness = rng.uniform(1.5, 2.4);
        flourish.ink_base = rng.uniform(30.0, 75.0);
        flourish.ink_amp = rng.uniform(20.0, 50.0);
        flourish.press_freq = rng.uniform(1.0, 2.5);
        flourish.press_phase = rng.uniform(0.0, 6.2831853);
        model.strokes.push_back(std::move(flourish));
    }
    return model;
}

struct InstanceStyle {
    double anchor_jitter = 0.0;
    double rot = 0.0, scale = 1.0, shear = 0.0, yscale = 1.0;
    double dx = 0.0, dy = 0.0;
    double thickness_mul = 1.0;
    double ink_shift = 0.0, amp_shift = 0.0, phase_shift = 0.0;
    bool replace_pressure = false;
    double ink_base = 0.0, ink_amp = 0.0, press_freq = 0.0, press_phase = 0.0;
};

HandModel perturb(const HandModel& base, const InstanceStyle& st, Rng& rng, int w, int h) {
    HandModel out = base;
    const double cx = w / 2.0, cy = h / 2.0;
    const double cr = std::cos(st.rot), sr = std::sin(st.rot);
    for (auto& stroke : out.strokes) {
        for (auto& p : stroke.anchors) {
            double x = p.x - cx + rng.normal(0.0, st.anchor_jitter);
            double y = p.y - cy + rng.normal(0.0, st.anchor_jitter);
            y *= st.yscale;
            x += st.shear * y;
            const double rx = (cr * x - sr * y) * st.scale;
            const double ry = (sr * x + cr * y) * st.scale;
            p.x = rx + cx + st.dx;
            p.y = ry + cy + st.dy;
        }
        stroke.thickness = std::max(1.0, stroke.thickness * st.thickness_mul);
        if (st.replace_pressure) {
            stroke.ink_base = st.ink_base;
            stroke.ink_amp = st.ink_amp;
            stroke.press_freq = st.press_freq;
            stroke.press_phase = st.press_phase;
        } else {
            stroke.ink_base = std::clamp(stroke.ink_base + st.ink_shift, 5.0, 120.0);
            stroke.ink_amp = std::clamp(stroke.ink_amp + st.amp_shift, 5.0, 90.0);
            stroke.press_phase += st.phase_shift;
        }
    }
    return out;
}

Vec2 catmull_rom(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3, double t) {
    const double t2 = t * t, t3 = t2 * t;
    const auto comp = [&](double a, double b, double c, double d) {
        return 0.5 * ((2.0 * b) + (-a + c) * t + (2.0 * a - 5.0 * b + 4.0 * c - d) * t2 +
                      (-a + 3.0 * b - 3.0 * c + d) * t3);
    };
    return {comp(p0.x, p1.x, p2.x, p3.x), comp(p0.y, p1.y, p2.y, p3.y)};
}

void stamp(GrayImage& img, double cx, double cy, double radius, double value) {
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius - 1)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + radius + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius - 1)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + radius + 1)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double d = std::hypot(x - cx, y - cy);
            double v;
            if (d <= radius - 0.7)
                v = value;
            else if (d <= radius + 0.7)
                v = value + (255.0 - value) * (d - (radius - 0.7)) / 1.4;
            else
                continue;
            const auto byte = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            auto& px = img.at(x, y);
            if (byte < px) px = byte;
        }
    }
}

void render_stroke(GrayImage& img, const Stroke& stroke) {
    const auto& a = stroke.anchors;
    if (a.size() < 2) return;
    const int segs = static_cast<int>(a.size()) - 1;

    // total sample count drives the arc-position parameter for pressure
    std::vector<int> steps(segs);
    int total = 0;
    for (int i = 0; i < segs; ++i) {
        const double chord = std::hypot(a[i + 1].x - a[i].x, a[i + 1].y - a[i].y);
        steps[i] = std::max(2, static_cast<int>(std::ceil(chord * 1.6)));
        total += steps[i];
    }

    int done = 0;
    for (int i = 0; i < segs; ++i) {
        const Vec2& p0 = a[i == 0 ? 0 : i - 1];
        const Vec2& p1 = a[i];
        const Vec2& p2 = a[i + 1];
        const Vec2& p3 = a[std::min<std::size_t>(i + 2, a.size() - 1)];
        for (int sline = 0; sline < steps[i]; ++sline) {
            const double t = static_cast<double>(sline) / steps[i];
            const Vec2 p = catmull_rom(p0, p1, p2, p3, t);
            const double s = static_cast<double>(done + sline) / total;
            const double pressure =
                0.5 + 0.5 * std::sin(6.2831853 * stroke.press_freq * s + stroke.press_phase);
            const double value = std::clamp(stroke.ink_base + stroke.ink_amp * (1.0 - pressure),
                                            5.0, 200.0);
            // ends taper slightly
            const double taper = std::min({1.0, 0.25 + 3.0 * s, 0.25 + 3.0 * (1.0 - s)});
            stamp(img, p.x, p.y, 0.5 * stroke.thickness * (0.6 + 0.4 * taper) + 0.5, value);
        }
        done += steps[i];
    }
}

void add_scan_noise(GrayImage& img, Rng& rng) {
    for (auto& p : img.pixels) {
        const double v = p + rng.normal(0.0, 2.0);
        p = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
    const auto n = static_cast<std::int64_t>(img.pixels.size());
    const auto salt = static_cast<std::int64_t>(0.0015 * static_cast<double>(n));
    for (std::int64_t i = 0; i < salt; ++i) {
        const auto pos = static_cast<std::size_t>(rng.range(0, n - 1));
        img.pixels[pos] = static_cast<std::uint8_t>(rng.range(0, 255));
    }
}

InstanceStyle genuine_style(Rng& rng) {
    InstanceStyle st;
    st.anchor_jitter = 2.6;
    st.rot = rng.normal(0.0, 0.025);
    st.scale = rng.normal(1.0, 0.035);
    st.dx = rng.normal(0.0, 5.0);
    st.dy = rng.normal(0.0, 3.5);
    st.thickness_mul = rng.normal(1.0, 0.09);
    st.ink_shift = rng.normal(0.0, 7.0);
    st.amp_shift = rng.normal(0.0, 6.0);
    st.phase_shift = rng.normal(0.0, 0.35);
    return st;
}

// A forger redraws the target's shape: coarser jitter, their own slant and
// their own pen-pressure habits.
InstanceStyle forgery_style(Rng& rng, Rng& forger_hand) {
    InstanceStyle st;
    st.anchor_jitter = 6.0;
    st.rot = rng.normal(0.0, 0.05);
    st.scale = rng.normal(1.0, 0.07);
    st.yscale = forger_hand.uniform(0.85, 1.15);
    st.shear = forger_hand.uniform(-0.09, 0.09);
    st.dx = rng.normal(0.0, 7.0);
    st.dy = rng.normal(0.0, 5.0);
    st.thickness_mul = forger_hand.uniform(0.8, 1.25);
    st.replace_pressure = true;
    st.ink_base = forger_hand.uniform(25.0, 70.0);
    st.ink_amp = forger_hand.uniform(25.0, 60.0);
    st.press_freq = forger_hand.uniform(0.8, 3.0);
    st.press_phase = forger_hand.uniform(0.0, 6.2831853);
    return st;
}

GrayImage render_instance(const SynthConfig& cfg, int subject, int kind, int instance) {
    const std::uint64_t subject_key = mix_seed(cfg.seed, kStreamSubjectModel ^
                                                             (static_cast<std::uint64_t>(subject) << 8));
    Rng model_rng(subject_key);
    const HandModel base = make_hand_model(model_rng, cfg.canvas_width, cfg.canvas_height);

    GrayImage img = GrayImage::filled(cfg.canvas_width, cfg.canvas_height, 253);
    HandModel drawn;
    std::uint64_t noise_key;
    if (kind == 0) {
        drawn = base;
        noise_key = mix_seed(cfg.seed, kStreamNoise ^ subject_key);
    } else if (kind == 1) {
        Rng rng(mix_seed(cfg.seed, kStreamGenuine ^ subject_key ^
                                       (static_cast<std::uint64_t>(instance) << 32)));
        drawn = perturb(base, genuine_style(rng), rng, cfg.canvas_width, cfg.canvas_height);
        noise_key = rng.bits();
    } else {
        // forger f imitates subject; the forger's own hand supplies the style
        const int forger = (subject + 1 + instance) % cfg.subjects;
        Rng forger_hand(mix_seed(cfg.seed, kStreamSubjectModel ^
                                               (static_cast<std::uint64_t>(forger) << 8) ^ 0xf0));
        Rng rng(mix_seed(cfg.seed, kStreamForgery ^ subject_key ^
                                       (static_cast<std::uint64_t>(instance) << 32)));
        drawn = perturb(base, forgery_style(rng, forger_hand), rng, cfg.canvas_width,
                        cfg.canvas_height);
        noise_key = rng.bits();
    }

    for (const auto& stroke : drawn.strokes) render_stroke(img, stroke);
    Rng noise_rng(noise_key);
    add_scan_noise(img, noise_rng);
    return img;
}

std::string subject_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "s%03d", index);
    return buf;
}

}  // namespace

GrayImage render_sample(const SynthConfig& cfg, int subject_index, int kind, int instance) {
    return render_instance(cfg, subject_index, kind, instance);
}

DatasetManifest synth_dataset(const std::filesystem::path& root, const SynthConfig& cfg) {
    if (cfg.subjects < 1 || cfg.genuine_per_subject < 1)
        raise(Errc::invalid_argument, "synth_dataset: counts must be >= 1");
    if (cfg.enroll_per_subject < 1 || cfg.enroll_per_subject > cfg.genuine_per_subject)
        raise(Errc::invalid_argument,
              "synth_dataset: enroll split must be within the genuine count");

    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) raise(Errc::io_failure, "synth_dataset: cannot create " + root.string());

    DatasetManifest manifest;
    manifest.root = root;
    manifest.seed = cfg.seed;
    manifest.params = cfg;

    for (int s = 0; s < cfg.subjects; ++s) {
        SubjectFiles files;
        files.id = subject_id(s);
        const auto dir = root / files.id;
        std::filesystem::create_directories(dir, ec);
        if (ec) raise(Errc::io_failure, "synth_dataset: cannot create " + dir.string());

        for (int g = 0; g < cfg.genuine_per_subject; ++g) {
            char name[32];
            std::snprintf(name, sizeof name, "g%02d.pgm", g);
            const std::string rel = files.id + "/" + name;
            write_pgm(render_instance(cfg, s, 1, g), root / rel);
            files.genuine.push_back(rel);
            (g < cfg.enroll_per_subject ? files.enroll : files.test).push_back(rel);
        }
        for (int f = 0; f < cfg.forgeries_per_subject; ++f) {
            char name[32];
            std::snprintf(name, sizeof name, "f%02d.pgm", f);
            const std::string rel = files.id + "/" + name;
            write_pgm(render_instance(cfg, s, 2, f), root / rel);
            files.forgery.push_back(rel);
        }
        manifest.subjects.push_back(std::move(files));
    }
    return manifest;
}

void validate_manifest(const DatasetManifest& m) {
    if (m.subjects.empty()) raise(Errc::parse_error, "manifest: no subjects");
    for (const auto& s : m.subjects) {
        if (s.enroll.size() + s.test.size() != s.genuine.size())
            raise(Errc::parse_error, "manifest: split sizes disagree for " + s.id);
        for (const auto& e : s.enroll)
            if (std::find(s.test.begin(), s.test.end(), e) != s.test.end())
                raise(Errc::parse_error, "manifest: enroll/test overlap for " + s.id);
        for (const auto* list : {&s.genuine, &s.forgery}) {
            for (const auto& rel : *list) {
                if (!std::filesystem::exists(m.resolve(rel)))
                    raise(Errc::io_failure, "manifest: missing file " + m.resolve(rel).string());
            }
        }
    }
}

}  // namespace sigid
