#include "sigid/fusion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigid/error.hpp"

namespace sigid {

bool operator==(const SvmModel& a, const SvmModel& b) {
    return a.support_vectors == b.support_vectors && a.labels == b.labels &&
           a.alphas == b.alphas && a.bias == b.bias && a.C == b.C && a.tol == b.tol &&
           a.converged == b.converged && a.iterations == b.iterations && a.seed == b.seed &&
           a.n_positive == b.n_positive && a.n_negative == b.n_negative &&
           a.sv_indices == b.sv_indices;
}

double kernel(const ScoreVec& a, const ScoreVec& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

namespace {

// Platt-style SMO working state. u_i tracks sum_j alpha_j y_j K(i,j) without
// the threshold, so errors are E_i = u_i + b - y_i.
struct Smo {
    const std::vector<FusionSample>& samples;
    const SvmConfig& cfg;
    int n;
    std::vector<double> alpha, u;
    double b = 0.0;

    explicit Smo(const std::vector<FusionSample>& s, const SvmConfig& c)
        : samples(s), cfg(c), n(static_cast<int>(s.size())), alpha(s.size(), 0.0),
          u(s.size(), 0.0) {}

    double k(int i, int j) const { return kernel(samples[i].m, samples[j].m); }
    double err(int i) const { return u[i] + b - samples[i].label; }
    bool non_bound(int i) const { return alpha[i] > 0.0 && alpha[i] < cfg.C; }

    bool take_step(int i1, int i2) {
        if (i1 == i2) return false;
        const double a1 = alpha[i1], a2 = alpha[i2];
        const int y1 = samples[i1].label, y2 = samples[i2].label;
        const double e1 = err(i1), e2 = err(i2);
        const double s = y1 * y2;
        const double C = cfg.C;

        double lo, hi;
        if (s > 0) {
            lo = std::max(0.0, a1 + a2 - C);
            hi = std::min(C, a1 + a2);
        } else {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(C, C + a2 - a1);
        }
        if (lo >= hi) return false;

        const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
        } else {
            // Degenerate curvature: evaluate the dual objective at both ends.
            const double f1 = y1 * (u[i1] - y1) - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * (u[i2] - y2) - s * a1 * k12 - a2 * k22;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (obj_lo < obj_hi - 1e-12)
                a2_new = lo;
            else if (obj_lo > obj_hi + 1e-12)
                a2_new = hi;
            else
                return false;
        }

        if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;

        double a1_new = a1 + s * (a2 - a2_new);
        // Snap round-off residue onto the bounds.
        const double snap = 1e-10 * C;
        if (a1_new < snap) a1_new = 0.0;
        if (a1_new > C - snap) a1_new = C;

        const double dg1 = y1 * (a1_new - a1);
        const double dg2 = y2 * (a2_new - a2);
        for (int i = 0; i < n; ++i) u[i] += dg1 * k(i1, i) + dg2 * k(i2, i);
        alpha[i1] = a1_new;
        alpha[i2] = a2_new;

        // Threshold so that the updated pair sits on its margin.
        const double b1 = y1 - u[i1];
        const double b2 = y2 - u[i2];
        if (a1_new > 0.0 && a1_new < C)
            b = b1;
        else if (a2_new > 0.0 && a2_new < C)
            b = b2;
        else
            b = 0.5 * (b1 + b2);
        return true;
    }

    bool examine(int i2) {
        const int y2 = samples[i2].label;
        const double a2 = alpha[i2];
        const double e2 = err(i2);
        const double r2 = e2 * y2;
        const bool violates = (r2 < -cfg.tol && a2 < cfg.C) || (r2 > cfg.tol && a2 > 0.0);
        if (!violates) return false;

        // Second-choice heuristic: largest |E1 - E2| among non-bound points.
        int best = -1;
        double best_gap = -1.0;
        for (int i = 0; i < n; ++i) {
            if (!non_bound(i)) continue;
            const double gap = std::abs(err(i) - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best >= 0 && take_step(best, i2)) return true;
        for (int i = 0; i < n; ++i)
            if (non_bound(i) && take_step(i, i2)) return true;
        for (int i = 0; i < n; ++i)
            if (take_step(i, i2)) return true;
        return false;
    }
};

}  // namespace

SvmModel train(const std::vector<FusionSample>& samples, const SvmConfig& cfg) {
    if (cfg.C <= 0.0) raise(Errc::invalid_argument, "train: C must be positive");
    int n_pos = 0, n_neg = 0;
    for (const auto& s : samples) {
        if (s.label == 1)
            ++n_pos;
        else if (s.label == -1)
            ++n_neg;
        else
            raise(Errc::invalid_argument, "train: labels must be +1 or -1");
        for (const double v : s.m)
            if (!std::isfinite(v)) raise(Errc::invalid_argument, "train: non-finite sample");
    }
    if (n_pos == 0 || n_neg == 0)
        raise(Errc::degenerate_training_set,
              "train: need at least one sample of each class (got " + std::to_string(n_pos) +
                  " positive, " + std::to_string(n_neg) + " negative)");

    Smo smo(samples, cfg);
    const int n = smo.n;

    bool examine_all = true;
    bool converged = false;
    int passes = 0;
    while (passes < cfg.max_passes) {
        int changed = 0;
        if (examine_all) {
            for (int i = 0; i < n; ++i) changed += smo.examine(i);
        } else {
            for (int i = 0; i < n; ++i)
                if (smo.non_bound(i)) changed += smo.examine(i);
        }
        ++passes;
        if (examine_all) {
            if (changed == 0) {
                converged = true;
                break;
            }
            examine_all = false;
        } else if (changed == 0) {
            examine_all = true;
        }
    }

    // Final threshold: average over on-margin support vectors, else the
    // midpoint of the interval the bound constraints leave feasible.
    double margin_sum = 0.0;
    int margin_count = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double target = samples[i].label - smo.u[i];
        if (smo.non_bound(i)) {
            margin_sum += target;
            ++margin_count;
        } else if ((smo.alpha[i] == 0.0 && samples[i].label == 1) ||
                   (smo.alpha[i] == cfg.C && samples[i].label == -1)) {
            lo = std::max(lo, target);
        } else {
            hi = std::min(hi, target);
        }
    }
    double bias;
    if (margin_count > 0)
        bias = margin_sum / margin_count;
    else if (std::isfinite(lo) && std::isfinite(hi))
        bias = 0.5 * (lo + hi);
    else
        bias = std::isfinite(lo) ? lo : hi;

    SvmModel model;
    model.C = cfg.C;
    model.tol = cfg.tol;
    model.seed = cfg.seed;
    model.bias = bias;
    model.converged = converged;
    model.iterations = passes;
    model.n_positive = n_pos;
    model.n_negative = n_neg;
    for (int i = 0; i < n; ++i) {
        if (smo.alpha[i] > 0.0) {
            model.support_vectors.push_back(samples[i].m);
            model.labels.push_back(samples[i].label);
            model.alphas.push_back(smo.alpha[i]);
            model.sv_indices.push_back(i);
        }
    }
    return model;
}

double decision_value(const SvmModel& m, const ScoreVec& x) {
    double sum = m.bias;
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
        sum += m.alphas[i] * m.labels[i] * kernel(x, m.support_vectors[i]);
    return sum;
}

int decide(const SvmModel& m, const ScoreVec& x) {
    return decision_value(m, x) >= 0.0 ? 1 : -1;
}

SvmModel prune_dependent_svs(const SvmModel& m, double eps) {
    std::vector<ScoreVec> vecs = m.support_vectors;
    std::vector<double> gamma(vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i) gamma[i] = m.alphas[i] * m.labels[i];

    bool removed = true;
    while (removed && vecs.size() > 1) {
        removed = false;
        const int r = static_cast<int>(vecs.size());
        Eigen::MatrixXd gram(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) gram(i, j) = kernel(vecs[i], vecs[j]);

        for (int k = 0; k < r && !removed; ++k) {
            Eigen::MatrixXd a(r - 1, r - 1);
            Eigen::VectorXd rhs(r - 1);
            int ri = 0;
            for (int i = 0; i < r; ++i) {
                if (i == k) continue;
                rhs[ri] = gram(i, k);
                int cj = 0;
                for (int j = 0; j < r; ++j) {
                    if (j == k) continue;
                    a(ri, cj++) = gram(i, j);
                }
                ++ri;
            }
            const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(rhs);
            const double residual = (a * c - rhs).norm();
            if (residual <= eps) {
                int ci = 0;
                for (int i = 0; i < r; ++i) {
                    if (i == k) continue;
                    gamma[i] += gamma[k] * c[ci++];
                }
                vecs.erase(vecs.begin() + k);
                gamma.erase(gamma.begin() + k);
                removed = true;
            }
        }

        for (std::size_t i = vecs.size(); i-- > 0;) {
            if (gamma[i] == 0.0) {
                vecs.erase(vecs.begin() + i);
                gamma.erase(gamma.begin() + i);
            }
        }
    }

    SvmModel out;
    out.bias = m.bias;
    out.C = m.C;
    out.tol = m.tol;
    out.converged = m.converged;
    out.iterations = m.iterations;
    out.seed = m.seed;
    out.n_positive = m.n_positive;
    out.n_negative = m.n_negative;
    out.support_vectors = std::move(vecs);
    for (const double g : gamma) {
        out.labels.push_back(g > 0.0 ? 1 : -1);
        out.alphas.push_back(std::abs(g));
    }
    return out;
}

ScoreVec collapsed_weights(const SvmModel& m) {
    ScoreVec w{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
        const double g = m.alphas[i] * m.labels[i];
        for (int d = 0; d < 3; ++d) w[d] += g * m.support_vectors[i][d];
    }
    return w;
}

}  // namespace sigid
