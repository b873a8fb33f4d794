#include "sigid/workbench.hpp"

#include <algorithm>
#include <numeric>

#include "sigid/persist.hpp"
#include "sigid/rng.hpp"

namespace sigid {

FeatureVector features_from_file(const std::filesystem::path& image,
                                 const PreprocessConfig& pre, const FeatureConfig& feat) {
    return extract(preprocess(read_pgm(image), pre), feat);
}

FeatureTable extract_dataset_features(const DatasetManifest& m, const PreprocessConfig& pre,
                                      const FeatureConfig& feat) {
    FeatureTable table;
    for (const auto& subject : m.subjects) {
        SubjectFeatureSet set;
        for (const auto& rel : subject.enroll)
            set.enroll.push_back(features_from_file(m.resolve(rel), pre, feat));
        for (const auto& rel : subject.test)
            set.test.push_back(features_from_file(m.resolve(rel), pre, feat));
        for (const auto& rel : subject.forgery)
            set.forgery.push_back(features_from_file(m.resolve(rel), pre, feat));
        table.emplace(subject.id, std::move(set));
    }
    return table;
}

Gallery enroll_gallery(const FeatureTable& features, const MatcherConfig& cfg) {
    std::map<std::string, std::vector<FeatureVector>> templates;
    for (const auto& [id, set] : features) templates.emplace(id, set.enroll);
    return enroll(templates, cfg);
}

std::vector<FusionSample> build_training_samples(const FeatureTable& features,
                                                 const Gallery& gallery,
                                                 const MatcherConfig& cfg, int neg_ratio,
                                                 std::uint64_t seed) {
    std::vector<FusionSample> positives;
    std::vector<FusionSample> negatives;

    for (const auto& [id, set] : features) {
        const auto& templates = set.enroll;
        if (templates.size() < 2) continue;
        for (std::size_t held = 0; held < templates.size(); ++held) {
            std::vector<FeatureVector> rest;
            rest.reserve(templates.size() - 1);
            for (std::size_t i = 0; i < templates.size(); ++i)
                if (i != held) rest.push_back(templates[i]);
            const SubjectStats loo = fit_subject_stats(id, rest, cfg);
            const ScoreTriple own = score_triple(templates[held], loo, cfg.empirical_k);
            positives.push_back({{own.s_ed, own.s_md, own.s_ge}, 1});

            for (const auto& [other_id, other_stats] : gallery.entries) {
                if (other_id == id) continue;
                const ScoreTriple t =
                    score_triple(templates[held], other_stats, cfg.empirical_k);
                negatives.push_back({{t.s_ed, t.s_md, t.s_ge}, -1});
            }
        }
    }
    if (positives.empty())
        raise(Errc::no_templates,
              "build_training_samples: need at least 2 enrollment templates per subject");

    const std::size_t keep =
        std::min(negatives.size(), positives.size() * static_cast<std::size_t>(neg_ratio));
    if (keep < negatives.size()) {
        // deterministic Fisher-Yates on an index permutation
        std::vector<std::size_t> order(negatives.size());
        std::iota(order.begin(), order.end(), 0);
        Rng rng(mix_seed(seed, 0x7261696e));
        for (std::size_t i = negatives.size() - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(i)));
            std::swap(order[i], order[j]);
        }
        order.resize(keep);
        std::sort(order.begin(), order.end());
        std::vector<FusionSample> kept;
        kept.reserve(keep);
        for (const auto i : order) kept.push_back(negatives[i]);
        negatives = std::move(kept);
    }

    std::vector<FusionSample> samples = std::move(positives);
    samples.insert(samples.end(), negatives.begin(), negatives.end());
    return samples;
}

Report evaluate_dataset(const Gallery& gallery, const SvmModel& model,
                        const FeatureTable& features) {
    std::vector<LabeledQuery> genuine, forgery;
    for (const auto& [id, set] : features) {
        for (const auto& fv : set.test) genuine.push_back({id, fv});
        for (const auto& fv : set.forgery) forgery.push_back({id, fv});
    }
    return evaluate(gallery, model, genuine, forgery);
}

PipelineResult run_pipeline(const std::filesystem::path& dataset_dir, const RunConfig& cfg) {
    PipelineResult result;
    result.manifest = synth_dataset(dataset_dir, cfg.synth);
    save_manifest(result.manifest, dataset_dir / "manifest.json");
    result.features =
        extract_dataset_features(result.manifest, cfg.preprocess, cfg.features);
    result.gallery = enroll_gallery(result.features, cfg.matcher);
    result.model = train(build_training_samples(result.features, result.gallery, cfg.matcher,
                                                cfg.training.neg_ratio, cfg.svm.seed),
                         cfg.svm);
    result.report = evaluate_dataset(result.gallery, result.model, result.features);
    return result;
}

}  // namespace sigid
