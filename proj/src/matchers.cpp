#include "sigid/matchers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>

#include "sigid/kernels.hpp"

namespace sigid {

bool operator==(const SubjectStats& a, const SubjectStats& b) {
    return a.subject == b.subject && a.mean == b.mean && a.std == b.std &&
           a.weights == b.weights && a.cov_model == b.cov_model && a.lambda == b.lambda &&
           a.chol == b.chol && a.n_templates == b.n_templates;
}

namespace {

void check_dim(std::span<const double> q, const SubjectStats& s, const char* op) {
    if (q.size() != s.dim())
        raise(Errc::dimension_mismatch, std::string(op) + ": query dim " +
                                            std::to_string(q.size()) + " != stats dim " +
                                            std::to_string(s.dim()));
}

SubjectStats fit_impl(const std::string& subject,
                      const std::vector<std::span<const double>>& templates,
                      const MatcherConfig& cfg) {
    if (templates.empty())
        raise(Errc::no_templates, "fit_subject_stats: subject '" + subject + "'");
    const std::size_t dim = templates.front().size();
    for (const auto& t : templates) {
        if (t.size() != dim)
            raise(Errc::dimension_mismatch,
                  "fit_subject_stats: inconsistent template dimensions for '" + subject + "'");
    }
    if (!cfg.weights.empty() && cfg.weights.size() != dim)
        raise(Errc::dimension_mismatch, "fit_subject_stats: weight vector dim " +
                                            std::to_string(cfg.weights.size()) +
                                            " != feature dim " + std::to_string(dim));

    SubjectStats s;
    s.subject = subject;
    s.n_templates = static_cast<int>(templates.size());
    s.cov_model = cfg.cov_model;
    s.mean.assign(dim, 0.0);
    s.std.assign(dim, 0.0);
    s.weights = cfg.weights.empty() ? std::vector<double>(dim, 1.0) : cfg.weights;

    const double n = static_cast<double>(templates.size());
    for (const auto& t : templates)
        for (std::size_t i = 0; i < dim; ++i) s.mean[i] += t[i];
    for (auto& m : s.mean) m /= n;

    for (const auto& t : templates) {
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = t[i] - s.mean[i];
            s.std[i] += d * d;
        }
    }
    for (auto& v : s.std) v = std::max(kSigmaFloor, std::sqrt(v / n));

    if (cfg.cov_model == CovModel::shrunk_full) {
        Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
        for (const auto& t : templates) {
            Eigen::VectorXd d(dim);
            for (std::size_t i = 0; i < dim; ++i) d[i] = t[i] - s.mean[i];
            cov.noalias() += d * d.transpose();
        }
        cov /= n;
        const double lambda =
            std::max(cfg.shrink_factor * cov.trace() / static_cast<double>(dim), 1e-12);
        cov.diagonal().array() += lambda;
        s.lambda = lambda;

        const Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success)
            raise(Errc::singular_covariance,
                  "fit_subject_stats: shrunk covariance not positive definite for '" +
                      subject + "'");
        const Eigen::MatrixXd L = llt.matrixL();
        s.chol.resize(dim * dim);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c)
                s.chol[r * dim + c] = c <= r ? L(r, c) : 0.0;
    }
    return s;
}

}  // namespace

SubjectStats fit_subject_stats(const std::string& subject,
                               std::span<const FeatureVector> templates,
                               const MatcherConfig& cfg) {
    std::vector<std::span<const double>> spans;
    spans.reserve(templates.size());
    for (const auto& t : templates) spans.emplace_back(t.values);
    return fit_impl(subject, spans, cfg);
}

SubjectStats fit_subject_stats_raw(const std::string& subject,
                                   const std::vector<std::vector<double>>& templates,
                                   const MatcherConfig& cfg) {
    std::vector<std::span<const double>> spans;
    spans.reserve(templates.size());
    for (const auto& t : templates) spans.emplace_back(t);
    return fit_impl(subject, spans, cfg);
}

double euclidean_distance(std::span<const double> q, const SubjectStats& s) {
    check_dim(q, s, "euclidean_distance");
    const std::size_t dim = s.dim();
    std::vector<double> w(dim);
    for (std::size_t i = 0; i < dim; ++i) w[i] = s.weights[i] / (s.std[i] * s.std[i]);
    const double sum = kernels::weighted_sqdev_sum(q, s.mean, w);
    return std::sqrt(sum / static_cast<double>(dim));
}

double mahalanobis_distance(std::span<const double> q, const SubjectStats& s) {
    check_dim(q, s, "mahalanobis_distance");
    const std::size_t dim = s.dim();

    if (s.cov_model == CovModel::diagonal) {
        std::vector<double> w(dim);
        for (std::size_t i = 0; i < dim; ++i) w[i] = 1.0 / (s.std[i] * s.std[i]);
        return std::sqrt(kernels::weighted_sqdev_sum(q, s.mean, w));
    }

    if (s.chol.size() != dim * dim)
        raise(Errc::singular_covariance,
              "mahalanobis_distance: missing covariance factor for '" + s.subject + "'");
    Eigen::VectorXd d(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = q[i] - s.mean[i];
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                         Eigen::RowMajor>>
        L(s.chol.data(), dim, dim);
    // C = L L^T, so q^T C^{-1} q = |L^{-1} d|^2
    const Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(d);
    return z.norm();
}

int empirical_match_count(std::span<const double> q, const SubjectStats& s, int k) {
    check_dim(q, s, "empirical_match_count");
    if (k < 1 || k > 3)
        raise(Errc::invalid_argument, "empirical_match_count: k must be 1, 2 or 3");
    return static_cast<int>(kernels::band_count(s.mean, q, s.std, static_cast<double>(k)));
}

ScoreTriple score_triple(std::span<const double> q, const SubjectStats& s, int k) {
    ScoreTriple t;
    t.raw_ed = euclidean_distance(q, s);
    t.raw_md = mahalanobis_distance(q, s);
    t.raw_ge = empirical_match_count(q, s, k);
    t.s_ed = 1.0 / (1.0 + t.raw_ed);
    t.s_md = 1.0 / (1.0 + t.raw_md);
    t.s_ge = static_cast<double>(t.raw_ge) / static_cast<double>(s.dim());
    return t;
}

ScoreTriple score_triple(const FeatureVector& q, const SubjectStats& s, int k) {
    return score_triple(std::span<const double>(q.values), s, k);
}

}  // namespace sigid
