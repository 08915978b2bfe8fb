#pragma once

// Soft-margin binary SVM with RBF kernel, trained by sequential dual
// optimization (SMO) to a fixed KKT tolerance, plus cross-validated grid
// search over (gamma, cost).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace simdist {

struct LabeledVector {
    std::string label;
    std::vector<double> features;
};

struct SvmModel {
    double gamma = 1.0;
    double cost = 1.0;
    double bias = 0.0;
    std::string positive_label, negative_label;
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coef;  // alpha_i * y_i

    std::size_t dimension() const {
        return support_vectors.empty() ? 0 : support_vectors[0].size();
    }
};

namespace detail {

inline double rbf(const std::vector<double>& a, const std::vector<double>& b,
                  double gamma) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

// Simplified SMO (Platt). Returns alphas and bias.
struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
};

inline SmoResult smo_train(const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y, double cost, double gamma,
                           double tol = 1e-3, int max_passes = 8,
                           int max_iter = 20000) {
    const std::size_t n = x.size();
    std::vector<double> alpha(n, 0.0);
    double b = 0.0;

    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) k[i][j] = k[j][i] = rbf(x[i], x[j], gamma);

    auto f = [&](std::size_t i) {
        double s = b;
        for (std::size_t j = 0; j < n; ++j)
            if (alpha[j] != 0.0) s += alpha[j] * y[j] * k[j][i];
        return s;
    };

    std::mt19937_64 rng(12345);
    int passes = 0, iter = 0;
    while (passes < max_passes && iter < max_iter) {
        ++iter;
        int changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double ei = f(i) - y[i];
            if ((y[i] * ei < -tol && alpha[i] < cost) ||
                (y[i] * ei > tol && alpha[i] > 0)) {
                std::uniform_int_distribution<std::size_t> pick(0, n - 2);
                std::size_t j = pick(rng);
                if (j >= i) ++j;
                double ej = f(j) - y[j];
                double ai_old = alpha[i], aj_old = alpha[j];
                double lo, hi;
                if (y[i] != y[j]) {
                    lo = std::max(0.0, aj_old - ai_old);
                    hi = std::min(cost, cost + aj_old - ai_old);
                } else {
                    lo = std::max(0.0, ai_old + aj_old - cost);
                    hi = std::min(cost, ai_old + aj_old);
                }
                if (lo >= hi) continue;
                double eta = 2 * k[i][j] - k[i][i] - k[j][j];
                if (eta >= 0) continue;
                double aj = aj_old - y[j] * (ei - ej) / eta;
                aj = std::clamp(aj, lo, hi);
                if (std::abs(aj - aj_old) < 1e-7) continue;
                double ai = ai_old + y[i] * y[j] * (aj_old - aj);
                alpha[i] = ai;
                alpha[j] = aj;
                double b1 = b - ei - y[i] * (ai - ai_old) * k[i][i] -
                            y[j] * (aj - aj_old) * k[i][j];
                double b2 = b - ej - y[i] * (ai - ai_old) * k[i][j] -
                            y[j] * (aj - aj_old) * k[j][j];
                if (ai > 0 && ai < cost)
                    b = b1;
                else if (aj > 0 && aj < cost)
                    b = b2;
                else
                    b = (b1 + b2) / 2;
                ++changed;
            }
        }
        passes = changed == 0 ? passes + 1 : 0;
    }
    return {alpha, b};
}

}  // namespace detail

inline double decision_value(const SvmModel& m, const std::vector<double>& v) {
    if (v.size() != m.dimension())
        throw std::invalid_argument("classify: dimension mismatch");
    double s = m.bias;
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
        s += m.dual_coef[i] * detail::rbf(m.support_vectors[i], v, m.gamma);
    return s;
}

// Decision value exactly 0 maps to the positive class.
inline std::string classify(const SvmModel& m, const std::vector<double>& v) {
    return decision_value(m, v) >= 0.0 ? m.positive_label : m.negative_label;
}

inline double evaluate(const SvmModel& m, const std::vector<LabeledVector>& test) {
    if (test.empty()) throw std::invalid_argument("evaluate: empty test set");
    std::size_t hits = 0;
    for (const auto& t : test)
        if (classify(m, t.features) == t.label) ++hits;
    return static_cast<double>(hits) / static_cast<double>(test.size());
}

struct TrainConfig {
    unsigned folds = 5;
    std::vector<double> gamma_grid;  // default 2^-4 .. 2^4
    std::vector<double> cost_grid;   // default 2^-2 .. 2^6
    std::uint64_t fold_seed = 7;
};

inline std::vector<double> log2_grid(int lo, int hi) {
    std::vector<double> g;
    for (int e = lo; e <= hi; ++e) g.push_back(std::ldexp(1.0, e));
    return g;
}

namespace detail {

inline SvmModel fit(const std::vector<LabeledVector>& data, const std::string& pos,
                    const std::string& neg, double gamma, double cost) {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (const auto& d : data) {
        x.push_back(d.features);
        y.push_back(d.label == pos ? 1 : -1);
    }
    auto r = smo_train(x, y, cost, gamma);
    SvmModel m;
    m.gamma = gamma;
    m.cost = cost;
    m.bias = r.bias;
    m.positive_label = pos;
    m.negative_label = neg;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (r.alpha[i] > 1e-12) {
            m.support_vectors.push_back(x[i]);
            m.dual_coef.push_back(r.alpha[i] * y[i]);
        }
    return m;
}

}  // namespace detail

// Grid search maximizing mean cross-validation accuracy (ties break to
// smaller cost, then smaller gamma), then retrain on all data.
inline SvmModel train(const std::vector<LabeledVector>& data, const TrainConfig& cfg = {}) {
    if (cfg.folds < 2) throw std::invalid_argument("train: cv folds must be >= 2");
    std::set<std::string> labels;
    for (const auto& d : data) labels.insert(d.label);
    if (labels.size() != 2)
        throw std::invalid_argument("train: exactly two classes required");
    auto it = labels.begin();
    std::string neg = *it++;
    std::string pos = *it;
    for (const auto& l : labels) {
        std::size_t c = 0;
        for (const auto& d : data) c += d.label == l;
        if (c < 2) throw std::invalid_argument("train: need >= 2 examples per class");
    }

    auto gammas = cfg.gamma_grid.empty() ? log2_grid(-4, 4) : cfg.gamma_grid;
    auto costs = cfg.cost_grid.empty() ? log2_grid(-2, 6) : cfg.cost_grid;

    // Deterministic fold assignment from the fold seed.
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(cfg.fold_seed);
    std::shuffle(order.begin(), order.end(), rng);

    unsigned folds = std::min<unsigned>(cfg.folds, static_cast<unsigned>(data.size()));

    double best_acc = -1.0;
    double best_gamma = gammas[0], best_cost = costs[0];
    for (double cost : costs)
        for (double gamma : gammas) {
            double acc_sum = 0.0;
            for (unsigned f = 0; f < folds; ++f) {
                std::vector<LabeledVector> tr, te;
                for (std::size_t idx = 0; idx < order.size(); ++idx)
                    (idx % folds == f ? te : tr).push_back(data[order[idx]]);
                bool tr_has_both = false;
                {
                    std::set<std::string> s;
                    for (const auto& d : tr) s.insert(d.label);
                    tr_has_both = s.size() == 2;
                }
                if (!tr_has_both || te.empty()) continue;
                auto m = detail::fit(tr, pos, neg, gamma, cost);
                acc_sum += evaluate(m, te);
            }
            double acc = acc_sum / folds;
            // Grid walked in ascending (cost, gamma) order, so keeping the
            // first maximum breaks ties toward smaller cost, then gamma.
            if (acc > best_acc + 1e-12) {
                best_acc = acc;
                best_gamma = gamma;
                best_cost = cost;
            }
        }

    return detail::fit(data, pos, neg, best_gamma, best_cost);
}

}  // namespace simdist
