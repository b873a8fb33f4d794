#pragma once

#include "sigid/dataset.hpp"
#include "sigid/features.hpp"
#include "sigid/fusion.hpp"
#include "sigid/imaging.hpp"
#include "sigid/matchers.hpp"

namespace sigid {

struct TrainingConfig {
    int neg_ratio = 5;  // impostor samples kept per genuine sample
};

// Every knob of a full run, serialized alongside outputs for reproducibility.
struct RunConfig {
    PreprocessConfig preprocess;
    FeatureConfig features;
    MatcherConfig matcher;
    SvmConfig svm;
    TrainingConfig training;
    SynthConfig synth;

    // One master seed drives both the generator and training subsampling.
    void set_seed(std::uint64_t seed) {
        synth.seed = seed;
        svm.seed = seed;
    }
};

}  // namespace sigid
