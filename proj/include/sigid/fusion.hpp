#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sigid {

// One fusion-training point: the three matcher similarities for a comparison,
// labeled +1 (same subject) or -1 (different subject / forgery).
using ScoreVec = std::array<double, 3>;

struct FusionSample {
    ScoreVec m{};
    int label = 0;  // +1 or -1
};

struct SvmConfig {
    double C = 10.0;
    double tol = 1e-3;
    int max_passes = 10000;
    std::uint64_t seed = 42;
};

// Trained soft-margin SVM over score vectors, linear kernel. Only samples
// with alpha > 0 are stored; sv_indices maps them back to the training set.
struct SvmModel {
    std::vector<ScoreVec> support_vectors;
    std::vector<int> labels;     // y_i
    std::vector<double> alphas;  // alpha_i > 0
    double bias = 0.0;
    double C = 10.0;
    double tol = 1e-3;
    bool converged = true;
    int iterations = 0;
    std::uint64_t seed = 0;
    int n_positive = 0;
    int n_negative = 0;
    std::vector<int> sv_indices;  // empty after pruning

    std::size_t sv_count() const { return support_vectors.size(); }
};

bool operator==(const SvmModel& a, const SvmModel& b);

// Linear kernel: plain dot product.
double kernel(const ScoreVec& a, const ScoreVec& b);

// Solves the soft-margin dual by sequential two-variable optimization until
// the KKT conditions hold within cfg.tol or cfg.max_passes sweeps elapse (in
// which case converged=false on the returned model). Deterministic.
SvmModel train(const std::vector<FusionSample>& samples, const SvmConfig& cfg = {});

// sum_i alpha_i y_i K(x, sv_i) + bias; this is the fused matching score.
double decision_value(const SvmModel& m, const ScoreVec& x);

// sign of decision_value; 0 counts as +1.
int decide(const SvmModel& m, const ScoreVec& x);

// Removes support vectors whose kernel column is, within least-squares
// residual eps over the Gram system, a combination of the others, folding
// their coefficient into the remaining ones. Decision values are preserved up
// to eps-scale error. The result is a decision-equivalent evaluator; its
// alphas no longer satisfy the dual box/equality constraints.
SvmModel prune_dependent_svs(const SvmModel& m, double eps);

// w = sum_i alpha_i y_i sv_i; with the linear kernel,
// decision_value(m, x) == dot(w, x) + bias.
ScoreVec collapsed_weights(const SvmModel& m);

}  // namespace sigid
