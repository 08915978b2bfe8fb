#pragma once

// Seeded synthetic data: random blocks, word-Markov text, generator-family
// objects for clustering fixtures, and category corpora for the term
// classification protocol. Everything is deterministic in the seed.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "simdist/compress.hpp"
#include "simdist/ncd.hpp"

namespace simdist::synth {

inline Bytes random_bytes(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(byte(rng));
    return out;
}

// Pairwise Euclidean distances between n seeded random points in the unit
// square: a generic small metric for tree-search tests.
inline DistanceMatrix point_cloud_matrix(std::size_t n, std::uint64_t seed, int dim = 2) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& x : p) x = u(rng);
    DistanceMatrix m;
    for (std::size_t i = 0; i < n; ++i) m.labels.push_back("L" + std::to_string(i));
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) {
                double d = pts[i][k] - pts[j][k];
                s += d * d;
            }
            m.values[i][j] = m.values[j][i] = std::sqrt(s);
        }
    return m;
}

// Word-level Markov chain: a seeded vocabulary of short words, each word
// followed by one of a few allowed successors. Strongly structured text
// with repeated multi-byte units.
inline Bytes markov_text(std::uint64_t seed, std::size_t n,
                         std::size_t vocab_size = 96, std::size_t branching = 4) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> letter('a', 'z');
    std::uniform_int_distribution<std::size_t> len(3, 8);
    std::vector<std::string> vocab(vocab_size);
    for (auto& w : vocab) {
        w.resize(len(rng));
        for (auto& c : w) c = static_cast<char>(letter(rng));
    }
    std::uniform_int_distribution<std::size_t> any(0, vocab_size - 1);
    std::vector<std::vector<std::size_t>> next(vocab_size);
    for (auto& ns : next) {
        ns.resize(branching);
        for (auto& x : ns) x = any(rng);
    }
    std::uniform_int_distribution<std::size_t> branch(0, branching - 1);
    Bytes out;
    out.reserve(n + 16);
    std::size_t cur = any(rng);
    while (out.size() < n) {
        for (char c : vocab[cur]) out.push_back(static_cast<std::uint8_t>(c));
        out.push_back(' ');
        cur = next[cur][branch(rng)];
    }
    out.resize(n);
    return out;
}

// Generator-family object: a sequence of chunks drawn from the family's
// shared chunk pool. Objects of one family share all their material;
// different families have disjoint pools.
inline Bytes family_object(std::uint64_t family_seed, std::uint64_t object_seed,
                           std::size_t n, std::size_t pool_size = 8,
                           std::size_t chunk = 256) {
    std::vector<Bytes> pool(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i)
        pool[i] = random_bytes(family_seed * 1000003 + i, chunk);
    std::mt19937_64 rng(object_seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
    Bytes out;
    out.reserve(n + chunk);
    while (out.size() < n) {
        const Bytes& c = pool[pick(rng)];
        out.insert(out.end(), c.begin(), c.end());
    }
    out.resize(n);
    return out;
}

// The 16-object heterogeneous set: 4 families x 4 objects, labels
// f<family>_o<object>.
inline std::vector<DataObject> family_fixture(std::uint64_t seed = 42,
                                              std::size_t families = 4,
                                              std::size_t per_family = 4,
                                              std::size_t size = 4096) {
    std::vector<DataObject> objs;
    for (std::size_t f = 0; f < families; ++f)
        for (std::size_t o = 0; o < per_family; ++o)
            objs.push_back({"f" + std::to_string(f) + "_o" + std::to_string(o),
                            family_object(seed + f, seed * 7919 + f * 101 + o, size)});
    return objs;
}

// The standard 10-sample normality suite: 5 Markov texts, 5 random blocks,
// 4 KiB each.
inline std::vector<Bytes> normality_suite(std::uint64_t seed = 7,
                                          std::size_t size = 4096) {
    std::vector<Bytes> s;
    for (std::uint64_t i = 0; i < 5; ++i) s.push_back(markov_text(seed + i, size));
    for (std::uint64_t i = 0; i < 5; ++i) s.push_back(random_bytes(seed + 100 + i, size));
    return s;
}

// --- category corpus for the classification protocol -----------------------------

struct CategoryCorpus {
    std::vector<std::string> documents;               // one text per document
    std::vector<std::vector<std::string>> category_terms;  // per category
};

// Synthetic corpus with `categories` disjoint vocabularies whose terms
// co-occur within category documents and (rarely) across them.
inline CategoryCorpus category_corpus(std::uint64_t seed, std::size_t categories = 20,
                                      std::size_t terms_per_category = 60,
                                      std::size_t docs_per_category = 40,
                                      std::size_t terms_per_doc = 24) {
    std::mt19937_64 rng(seed);
    CategoryCorpus cc;
    cc.category_terms.resize(categories);
    for (std::size_t c = 0; c < categories; ++c)
        for (std::size_t t = 0; t < terms_per_category; ++t)
            cc.category_terms[c].push_back("c" + std::to_string(c) + "w" + std::to_string(t));

    std::uniform_int_distribution<std::size_t> pick_term(0, terms_per_category - 1);
    std::uniform_int_distribution<std::size_t> pick_cat(0, categories - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t c = 0; c < categories; ++c) {
        for (std::size_t d = 0; d < docs_per_category; ++d) {
            std::string doc;
            for (std::size_t k = 0; k < terms_per_doc; ++k) {
                // Mostly in-category terms, occasional cross-category noise.
                std::size_t cat = u(rng) < 0.9 ? c : pick_cat(rng);
                doc += cc.category_terms[cat][pick_term(rng)];
                doc += ' ';
            }
            cc.documents.push_back(doc);
        }
    }
    return cc;
}

// Two Gaussian blobs in `dim` dimensions, labeled "pos"/"neg".
inline std::vector<std::pair<std::string, std::vector<double>>> gaussian_blobs(
    std::uint64_t seed, std::size_t per_class = 25, std::size_t dim = 6,
    double separation = 4.0, double noise = 0.5) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, noise);
    std::vector<std::pair<std::string, std::vector<double>>> out;
    for (std::size_t i = 0; i < per_class; ++i) {
        std::vector<double> a(dim), b(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            a[j] = g(rng);
            b[j] = separation + g(rng);
        }
        out.push_back({"pos", a});
        out.push_back({"neg", b});
    }
    return out;
}

}  // namespace simdist::synth
