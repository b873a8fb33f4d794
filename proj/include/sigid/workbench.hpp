#pragma once

#include <filesystem>
#include <map>

#include "sigid/config.hpp"
#include "sigid/dataset.hpp"
#include "sigid/identification.hpp"

namespace sigid {

// read -> preprocess -> extract
FeatureVector features_from_file(const std::filesystem::path& image,
                                 const PreprocessConfig& pre, const FeatureConfig& feat);

struct SubjectFeatureSet {
    std::vector<FeatureVector> enroll;
    std::vector<FeatureVector> test;
    std::vector<FeatureVector> forgery;
};

using FeatureTable = std::map<std::string, SubjectFeatureSet>;

FeatureTable extract_dataset_features(const DatasetManifest& m, const PreprocessConfig& pre,
                                      const FeatureConfig& feat);

Gallery enroll_gallery(const FeatureTable& features, const MatcherConfig& cfg);

// Leave-one-template-out pairs: each held-out enrollment template scored
// against its own subject's remaining templates (+1) and against every other
// subject's full stats (-1), the negatives deterministically subsampled to
// neg_ratio per positive.
std::vector<FusionSample> build_training_samples(const FeatureTable& features,
                                                 const Gallery& gallery,
                                                 const MatcherConfig& cfg, int neg_ratio,
                                                 std::uint64_t seed);

Report evaluate_dataset(const Gallery& gallery, const SvmModel& model,
                        const FeatureTable& features);

struct PipelineResult {
    DatasetManifest manifest;
    FeatureTable features;
    Gallery gallery;
    SvmModel model;
    Report report;
};

// synth -> extract -> enroll -> train -> evaluate, all under dataset_dir.
PipelineResult run_pipeline(const std::filesystem::path& dataset_dir, const RunConfig& cfg);

}  // namespace sigid
