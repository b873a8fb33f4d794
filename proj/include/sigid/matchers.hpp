#pragma once

#include <span>
#include <string>
#include <vector>

#include "sigid/features.hpp"

namespace sigid {

inline constexpr double kSigmaFloor = 1e-6;

enum class CovModel { diagonal, shrunk_full };

struct MatcherConfig {
    int empirical_k = 3;                     // band half-width in standard deviations
    CovModel cov_model = CovModel::diagonal;
    double shrink_factor = 0.1;              // lambda = shrink_factor * trace / dim
    std::vector<double> weights;             // per-feature weights; empty = all ones
};

// Per-subject enrollment statistics. std is floored at kSigmaFloor so that
// constant features never divide by zero. For the shrunk_full model the
// Cholesky factor of (cov + lambda*I) is stored lower-triangular row-major.
struct SubjectStats {
    std::string subject;
    std::vector<double> mean;
    std::vector<double> std;
    std::vector<double> weights;
    CovModel cov_model = CovModel::diagonal;
    double lambda = 0.0;
    std::vector<double> chol;
    int n_templates = 0;

    std::size_t dim() const { return mean.size(); }
};

bool operator==(const SubjectStats& a, const SubjectStats& b);

// The three matcher outputs for one query/subject comparison, raw and
// normalized to [0,1] similarities: s_ed = 1/(1+raw_ed), s_md = 1/(1+raw_md),
// s_ge = raw_ge / dim.
struct ScoreTriple {
    double raw_ed = 0.0;
    double raw_md = 0.0;
    int raw_ge = 0;
    double s_ed = 0.0;
    double s_md = 0.0;
    double s_ge = 0.0;
};

// Population mean/std per feature (divisor n), std floored at kSigmaFloor.
SubjectStats fit_subject_stats(const std::string& subject,
                               std::span<const FeatureVector> templates,
                               const MatcherConfig& cfg = {});
// Same fit for arbitrary-dimension raw vectors (small test schemas).
SubjectStats fit_subject_stats_raw(const std::string& subject,
                                   const std::vector<std::vector<double>>& templates,
                                   const MatcherConfig& cfg = {});

// Weighted, sigma-normalized RMS deviation:
// sqrt( sum_i w_i * (q_i - mean_i)^2 / std_i^2  /  dim ).
double euclidean_distance(std::span<const double> q, const SubjectStats& s);

// sqrt( (q-mean)^T C^{-1} (q-mean) ) under the stats' covariance model.
double mahalanobis_distance(std::span<const double> q, const SubjectStats& s);

// Number of features with |mean_i - q_i| <= k * std_i.
int empirical_match_count(std::span<const double> q, const SubjectStats& s, int k);

ScoreTriple score_triple(std::span<const double> q, const SubjectStats& s, int k = 3);
ScoreTriple score_triple(const FeatureVector& q, const SubjectStats& s, int k = 3);

}  // namespace sigid
