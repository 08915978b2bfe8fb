#pragma once

// Google distribution, Google code, and the Normalized Google Distance
// over a pluggable page-count provider. Ships a deterministic offline
// corpus provider; the live client lives in live_counts.hpp.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "simdist/ncd.hpp"

namespace simdist {

struct UnknownTermError : std::invalid_argument {
    explicit UnknownTermError(const std::string& what) : std::invalid_argument(what) {}
};

class CountProvider {
public:
    virtual ~CountProvider() = default;

    // f(x): number of pages/documents containing x.
    virtual double count(const std::string& term) const = 0;
    // f(x,y): number containing both. f(x,x) = f(x).
    virtual double pair_count(const std::string& x, const std::string& y) const = 0;
    // Page universe size M.
    virtual double universe() const = 0;
    // Normalizer N; defaults to M when no exact N is known.
    virtual double normalizer() const { return universe(); }

    virtual std::string id() const = 0;
};

// Unicode-agnostic word tokenizer: lowercased maximal runs of letters and
// digits (UTF-8 lead/continuation bytes treated as letters; no stemming).
inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char ch : text) {
        bool word = std::isalnum(ch) || ch >= 0x80;
        if (word) {
            cur.push_back(static_cast<char>(std::tolower(ch)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// Offline provider built from a document corpus: f(x) = documents
// containing x at least once, f(x,y) = documents containing both,
// M = document count, N = sum over singleton and doubleton events.
class CorpusIndex final : public CountProvider {
public:
    explicit CorpusIndex(const std::vector<std::vector<std::string>>& documents) {
        if (documents.empty()) throw std::invalid_argument("corpus_index: empty corpus");
        m_ = static_cast<double>(documents.size());
        std::uint32_t doc_id = 0;
        for (const auto& doc : documents) {
            std::set<std::string> terms(doc.begin(), doc.end());
            for (const auto& t : terms) postings_[t].push_back(doc_id);
            // N counts every page once per contained singleton and per
            // contained unordered pair of distinct terms.
            double t = static_cast<double>(terms.size());
            n_ += t + t * (t - 1) / 2.0;
            alpha_ = std::max(alpha_, t + t * (t - 1) / 2.0);
            ++doc_id;
        }
    }

    double count(const std::string& term) const override {
        auto it = postings_.find(term);
        return it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
    }

    double pair_count(const std::string& x, const std::string& y) const override {
        if (x == y) return count(x);
        auto ix = postings_.find(x);
        auto iy = postings_.find(y);
        if (ix == postings_.end() || iy == postings_.end()) return 0.0;
        std::size_t hits = 0;
        const auto& a = ix->second;
        const auto& b = iy->second;
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] == b[j]) { ++hits; ++i; ++j; }
            else if (a[i] < b[j]) ++i;
            else ++j;
        }
        return static_cast<double>(hits);
    }

    double universe() const override { return m_; }
    double normalizer() const override { return n_; }
    std::string id() const override { return "corpus"; }

    std::vector<std::string> vocabulary() const {
        std::vector<std::string> v;
        v.reserve(postings_.size());
        for (const auto& [t, _] : postings_) v.push_back(t);
        return v;
    }

    // Max number of count events (singletons plus pairs) any one document
    // contributes; guarantees M <= N <= alpha * M.
    double alpha() const { return alpha_; }

    const std::map<std::string, std::vector<std::uint32_t>>& postings() const {
        return postings_;
    }

    // Rebuild from serialized state (see io_formats).
    CorpusIndex(std::map<std::string, std::vector<std::uint32_t>> postings, double m,
                double n, double alpha)
        : postings_(std::move(postings)), m_(m), n_(n), alpha_(alpha) {}

    static CorpusIndex from_texts(const std::vector<std::string>& texts) {
        std::vector<std::vector<std::string>> docs;
        docs.reserve(texts.size());
        for (const auto& t : texts) docs.push_back(tokenize(t));
        return CorpusIndex(docs);
    }

private:
    std::map<std::string, std::vector<std::uint32_t>> postings_;
    double m_ = 0.0;
    double n_ = 0.0;
    double alpha_ = 0.0;
};

// Manual-counts provider: fixed f values, for checking historical numbers
// without network or corpus.
class ManualCounts final : public CountProvider {
public:
    ManualCounts(std::map<std::string, double> singles,
                 std::map<std::pair<std::string, std::string>, double> pairs, double n)
        : singles_(std::move(singles)), pairs_(std::move(pairs)), n_(n) {}

    double count(const std::string& term) const override {
        auto it = singles_.find(term);
        return it == singles_.end() ? 0.0 : it->second;
    }
    double pair_count(const std::string& x, const std::string& y) const override {
        if (x == y) return count(x);
        auto key = std::minmax(x, y);
        auto it = pairs_.find({key.first, key.second});
        return it == pairs_.end() ? 0.0 : it->second;
    }
    double universe() const override { return n_; }
    std::string id() const override { return "manual"; }

private:
    std::map<std::string, double> singles_;
    std::map<std::pair<std::string, std::string>, double> pairs_;
    double n_;
};

// g(x,y) = |x ∩ y| / N, g(x) = g(x,x); sums to 1 over singleton and
// doubleton events when N is the distribution's own normalizer.
struct GoogleDistribution {
    std::vector<std::string> vocabulary;
    const CountProvider* provider;
    double n;

    double g(const std::string& x, const std::string& y) const {
        return provider->pair_count(x, y) / n;
    }
    double g(const std::string& x) const { return g(x, x); }

    double total_mass() const {
        double sum = 0.0;
        for (std::size_t i = 0; i < vocabulary.size(); ++i)
            for (std::size_t j = i; j < vocabulary.size(); ++j)
                sum += g(vocabulary[i], vocabulary[j]);
        return sum;
    }
};

// G(x,y) = -log2 g(x,y); +inf for zero-probability events.
inline double google_code(const CountProvider& p, const std::string& x,
                          const std::string& y, double n) {
    double gxy = p.pair_count(x, y) / n;
    if (gxy <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log2(gxy);
}

inline double google_code(const CountProvider& p, const std::string& x, double n) {
    return google_code(p, x, x, n);
}

struct NgdFlags {
    bool count_anomaly = false;  // f(x,y) exceeded min(f(x), f(y))
    bool clamped_negative = false;
};

// NGD(x,y) = (max{log f(x), log f(y)} - log f(x,y))
//          / (log N - min{log f(x), log f(y)}).
// Returns +inf when f(x,y) = 0 (unrelated terms). Base-2 logs; the
// quotient is base-invariant.
inline double ngd(const CountProvider& p, const std::string& x, const std::string& y,
                  double n, NgdFlags* flags = nullptr) {
    double fx = p.count(x);
    double fy = p.count(y);
    if (fx <= 0.0) throw UnknownTermError("ngd: unknown term: " + x);
    if (fy <= 0.0) throw UnknownTermError("ngd: unknown term: " + y);
    if (n < std::max(fx, fy))
        throw std::invalid_argument("ngd: N must be at least max(f(x), f(y))");
    if (x == y) return 0.0;
    double fxy = p.pair_count(x, y);
    if (fxy <= 0.0) return std::numeric_limits<double>::infinity();
    if (flags && fxy > std::min(fx, fy)) flags->count_anomaly = true;

    double num = std::max(std::log2(fx), std::log2(fy)) - std::log2(fxy);
    double den = std::log2(n) - std::min(std::log2(fx), std::log2(fy));
    if (den <= 0.0) throw std::invalid_argument("ngd: degenerate denominator (N == min f)");
    double v = num / den;
    if (v < 0.0) {
        // Engine-estimate anomaly: pair count above singleton count.
        if (flags) flags->clamped_negative = true;
        v = 0.0;
    }
    return v;
}

struct NgdMatrixOptions {
    double ceiling = 2.0;  // finite stand-in for +inf entries
};

struct NgdMatrixResult {
    DistanceMatrix matrix;
    bool ceiling_applied = false;
    bool count_anomaly = false;
};

inline NgdMatrixResult ngd_matrix(const CountProvider& p,
                                  const std::vector<std::string>& terms, double n,
                                  const NgdMatrixOptions& opt = {}) {
    if (terms.size() < 2) throw std::invalid_argument("ngd_matrix: need >= 2 terms");
    {
        std::set<std::string> seen(terms.begin(), terms.end());
        if (seen.size() != terms.size())
            throw std::invalid_argument("ngd_matrix: duplicate terms");
    }
    std::vector<std::string> unknown;
    for (const auto& t : terms)
        if (p.count(t) <= 0.0) unknown.push_back(t);
    if (!unknown.empty()) {
        std::string msg = "ngd_matrix: unknown terms:";
        for (const auto& t : unknown) msg += " " + t;
        throw UnknownTermError(msg);
    }

    NgdMatrixResult res;
    res.matrix.labels = terms;
    res.matrix.values.assign(terms.size(), std::vector<double>(terms.size(), 0.0));
    for (std::size_t i = 0; i < terms.size(); ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            NgdFlags fl;
            double v = ngd(p, terms[i], terms[j], n, &fl);
            if (std::isinf(v)) {
                v = opt.ceiling;
                res.ceiling_applied = true;
            }
            res.count_anomaly = res.count_anomaly || fl.count_anomaly;
            res.matrix.values[i][j] = v;
            res.matrix.values[j][i] = v;
        }
    return res;
}

}  // namespace simdist
