#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sigid/image.hpp"

namespace sigid {

struct SynthConfig {
    int subjects = 40;
    int genuine_per_subject = 9;
    int forgeries_per_subject = 3;
    int enroll_per_subject = 6;
    std::uint64_t seed = 42;
    int canvas_width = 560;
    int canvas_height = 190;
};

struct SubjectFiles {
    std::string id;
    std::vector<std::string> genuine;  // paths relative to the dataset root
    std::vector<std::string> forgery;
    std::vector<std::string> enroll;   // enroll + test partition the genuine list
    std::vector<std::string> test;
};

struct DatasetManifest {
    std::filesystem::path root;  // not serialized; set when written or loaded
    std::uint64_t seed = 0;
    SynthConfig params;
    std::vector<SubjectFiles> subjects;

    std::filesystem::path resolve(const std::string& relative) const { return root / relative; }
};

// Renders a deterministic synthetic signature corpus under root and returns
// its manifest. Each subject is a parametric stroke model; genuine samples
// jitter it mildly, forgeries redraw it with another subject's hand. Byte
// identical output for identical configs.
DatasetManifest synth_dataset(const std::filesystem::path& root, const SynthConfig& cfg);

// Checks split disjointness/sizes and that every listed file exists.
void validate_manifest(const DatasetManifest& m);

// Exposed for tests: renders one sample image without touching the
// filesystem. kind: 0 = subject base, 1 = genuine instance, 2 = forgery.
GrayImage render_sample(const SynthConfig& cfg, int subject_index, int kind, int instance);

}  // namespace sigid
