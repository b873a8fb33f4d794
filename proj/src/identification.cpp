#include "sigid/identification.hpp"

#include <algorithm>

namespace sigid {

bool operator==(const Gallery& a, const Gallery& b) {
    return a.entries == b.entries && a.schema_id == b.schema_id &&
           a.cfg.empirical_k == b.cfg.empirical_k && a.cfg.cov_model == b.cfg.cov_model &&
           a.cfg.shrink_factor == b.cfg.shrink_factor && a.cfg.weights == b.cfg.weights;
}

Gallery enroll(const std::map<std::string, std::vector<FeatureVector>>& templates,
               const MatcherConfig& cfg) {
    if (templates.empty()) raise(Errc::no_templates, "enroll: no subjects");
    Gallery g;
    g.cfg = cfg;
    for (const auto& [subject, list] : templates) {
        if (list.empty()) raise(Errc::no_templates, "enroll: subject '" + subject + "'");
        g.entries.emplace(subject, fit_subject_stats(subject, list, cfg));
    }
    return g;
}

namespace {

struct ScoredSubject {
    const std::string* subject;
    ScoreTriple triple;
};

std::vector<ScoredSubject> score_all(const Gallery& g, const FeatureVector& q) {
    if (g.schema_id != kFeatureSchemaId)
        raise(Errc::schema_mismatch, "identify: gallery schema '" + g.schema_id +
                                         "' != '" + std::string(kFeatureSchemaId) + "'");
    if (g.entries.empty()) raise(Errc::no_templates, "identify: empty gallery");
    std::vector<ScoredSubject> scored;
    scored.reserve(g.entries.size());
    for (const auto& [subject, stats] : g.entries)
        scored.push_back({&subject, score_triple(q, stats, g.cfg.empirical_k)});
    return scored;
}

template <typename Key>
RankedList rank_by(const std::vector<ScoredSubject>& scored, Key key) {
    RankedList out;
    out.reserve(scored.size());
    for (const auto& s : scored) out.push_back({*s.subject, key(s.triple)});
    std::sort(out.begin(), out.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.subject < b.subject;
    });
    return out;
}

}  // namespace

RankedList identify(const Gallery& g, const SvmModel& model, const FeatureVector& q) {
    const auto scored = score_all(g, q);
    return rank_by(scored, [&](const ScoreTriple& t) {
        return decision_value(model, {t.s_ed, t.s_md, t.s_ge});
    });
}

int rank_of(const RankedList& r, const std::string& subject) {
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i].subject == subject) return static_cast<int>(i) + 1;
    raise(Errc::unknown_subject, "rank_of: '" + subject + "' not in ranked list");
}

CmcCurve cmc(const std::vector<int>& ranks, int n_subjects) {
    if (ranks.empty()) raise(Errc::empty_trials, "cmc: no ranks");
    for (const int r : ranks) {
        if (r < 1 || r > n_subjects)
            raise(Errc::invalid_argument, "cmc: rank " + std::to_string(r) +
                                              " outside [1, " + std::to_string(n_subjects) + "]");
    }
    CmcCurve curve;
    curve.probabilities.resize(n_subjects);
    std::vector<int> hits(n_subjects + 1, 0);
    for (const int r : ranks) ++hits[r];
    int cum = 0;
    for (int r = 1; r <= n_subjects; ++r) {
        cum += hits[r];
        curve.probabilities[r - 1] = static_cast<double>(cum) / static_cast<double>(ranks.size());
    }
    return curve;
}

Report evaluate(const Gallery& g, const SvmModel& model,
                std::span<const LabeledQuery> genuine_tests,
                std::span<const LabeledQuery> forgery_tests) {
    Report report;
    report.n_subjects = static_cast<int>(g.size());
    report.n_genuine = static_cast<int>(genuine_tests.size());
    report.n_forgery = static_cast<int>(forgery_tests.size());

    std::vector<int> ranks_fused, ranks_ed, ranks_md, ranks_ge;
    for (const auto& query : genuine_tests) {
        if (!g.entries.contains(query.subject))
            raise(Errc::unknown_subject, "evaluate: query subject '" + query.subject +
                                             "' is not enrolled");
        const auto scored = score_all(g, query.features);
        const auto fused = rank_by(scored, [&](const ScoreTriple& t) {
            return decision_value(model, {t.s_ed, t.s_md, t.s_ge});
        });
        const auto by_ed = rank_by(scored, [](const ScoreTriple& t) { return t.s_ed; });
        const auto by_md = rank_by(scored, [](const ScoreTriple& t) { return t.s_md; });
        const auto by_ge = rank_by(scored, [](const ScoreTriple& t) { return t.s_ge; });
        ranks_fused.push_back(rank_of(fused, query.subject));
        ranks_ed.push_back(rank_of(by_ed, query.subject));
        ranks_md.push_back(rank_of(by_md, query.subject));
        ranks_ge.push_back(rank_of(by_ge, query.subject));
    }

    if (!ranks_fused.empty()) {
        report.cmc_fused = cmc(ranks_fused, report.n_subjects);
        report.cmc_ed = cmc(ranks_ed, report.n_subjects);
        report.cmc_md = cmc(ranks_md, report.n_subjects);
        report.cmc_ge = cmc(ranks_ge, report.n_subjects);
        report.rank1_fused = report.cmc_fused.rank1();
        report.rank1_ed = report.cmc_ed.rank1();
        report.rank1_md = report.cmc_md.rank1();
        report.rank1_ge = report.cmc_ge.rank1();
    }

    if (!forgery_tests.empty()) {
        report.forgery_present = true;
        int hits = 0;
        for (const auto& query : forgery_tests) {
            if (!g.entries.contains(query.subject))
                raise(Errc::unknown_subject, "evaluate: forgery target '" + query.subject +
                                                 "' is not enrolled");
            const auto fused = identify(g, model, query.features);
            hits += rank_of(fused, query.subject) == 1;
        }
        report.forgery_rank1_hit_rate =
            static_cast<double>(hits) / static_cast<double>(forgery_tests.size());
    }
    return report;
}

}  // namespace sigid
