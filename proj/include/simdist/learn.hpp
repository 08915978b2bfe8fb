#pragma once

// Anchor-distance featurization and the term-classification protocol:
// terms become k-dimensional vectors of NGD values against a fixed anchor
// list, then feed a cross-validated SVM.

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "simdist/ngd.hpp"
#include "simdist/svm.hpp"

namespace simdist {

struct AnchorSet {
    std::vector<std::string> anchors;

    void validate(const CountProvider& p) const {
        std::set<std::string> seen;
        for (const auto& a : anchors) {
            if (!seen.insert(a).second)
                throw std::invalid_argument("anchor set: duplicate anchor " + a);
            if (p.count(a) <= 0.0)
                throw UnknownTermError("anchor set: unknown anchor " + a);
        }
        if (anchors.empty()) throw std::invalid_argument("anchor set: empty");
    }
};

// Entry i is NGD(anchor_i, term); +inf entries replaced by the ceiling.
inline std::vector<double> featurize(const CountProvider& p, const AnchorSet& anchors,
                                     const std::string& term, double n,
                                     double ceiling = 2.0) {
    if (p.count(term) <= 0.0) throw UnknownTermError("featurize: unknown term " + term);
    std::vector<double> v;
    v.reserve(anchors.anchors.size());
    for (const auto& a : anchors.anchors) {
        double d = ngd(p, a, term, n);
        v.push_back(std::isinf(d) ? ceiling : d);
    }
    return v;
}

inline std::vector<LabeledVector> featurize_all(
    const CountProvider& p, const AnchorSet& anchors,
    const std::vector<std::pair<std::string, std::string>>& labeled_terms, double n,
    double ceiling = 2.0) {
    std::vector<LabeledVector> out;
    out.reserve(labeled_terms.size());
    for (const auto& [label, term] : labeled_terms)
        out.push_back({label, featurize(p, anchors, term, n, ceiling)});
    return out;
}

// Accuracy statistics over repeated classification trials, in the style of
// the multi-category experiment report.
struct TrialReport {
    std::vector<double> accuracies;
    double mean = 0.0;
    double variance = 0.0;
    std::vector<std::size_t> histogram;  // 10 bins over [0, 1]

    static TrialReport from(const std::vector<double>& accs) {
        TrialReport r;
        r.accuracies = accs;
        for (double a : accs) r.mean += a;
        r.mean /= static_cast<double>(accs.size());
        for (double a : accs) r.variance += (a - r.mean) * (a - r.mean);
        r.variance /= static_cast<double>(accs.size());
        r.histogram.assign(10, 0);
        for (double a : accs) {
            auto bin = static_cast<std::size_t>(a * 10.0);
            if (bin > 9) bin = 9;
            ++r.histogram[bin];
        }
        return r;
    }
};

}  // namespace simdist
