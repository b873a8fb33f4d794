#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sigid/fusion.hpp"
#include "sigid/matchers.hpp"

namespace sigid {

// Enrolled population: per-subject statistics sharing one feature schema.
struct Gallery {
    std::map<std::string, SubjectStats> entries;
    std::string schema_id{kFeatureSchemaId};
    MatcherConfig cfg;

    std::size_t size() const { return entries.size(); }
};

bool operator==(const Gallery& a, const Gallery& b);

struct RankedEntry {
    std::string subject;
    double score = 0.0;
};

// Descending by score, ties broken by ascending subject id.
using RankedList = std::vector<RankedEntry>;

// p[r-1] = fraction of queries whose true subject landed at rank <= r.
struct CmcCurve {
    std::vector<double> probabilities;

    double rank1() const { return probabilities.empty() ? 0.0 : probabilities.front(); }
};

Gallery enroll(const std::map<std::string, std::vector<FeatureVector>>& templates,
               const MatcherConfig& cfg = {});

// One-vs-all: fused score against every enrolled subject, ranked.
RankedList identify(const Gallery& g, const SvmModel& model, const FeatureVector& q);

// 1-based position; throws UnknownSubject when absent.
int rank_of(const RankedList& r, const std::string& subject);

CmcCurve cmc(const std::vector<int>& ranks, int n_subjects);

struct LabeledQuery {
    std::string subject;  // true subject (genuine) or targeted subject (forgery)
    FeatureVector features;
};

struct Report {
    int n_subjects = 0;
    int n_genuine = 0;
    int n_forgery = 0;
    double rank1_fused = 0.0;
    double rank1_ed = 0.0;
    double rank1_md = 0.0;
    double rank1_ge = 0.0;
    CmcCurve cmc_fused, cmc_ed, cmc_md, cmc_ge;
    bool forgery_present = false;
    // Fraction of forgery queries ranking their targeted subject first.
    double forgery_rank1_hit_rate = 0.0;
};

// Genuine queries drive the four CMC curves (fused plus each single matcher
// ranked by its own similarity); forgery queries are reported separately.
Report evaluate(const Gallery& g, const SvmModel& model,
                std::span<const LabeledQuery> genuine_tests,
                std::span<const LabeledQuery> forgery_tests);

}  // namespace sigid
