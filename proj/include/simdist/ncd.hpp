#pragma once

// Compression distance E_C, normalized compression distance NCD, and
// pairwise distance matrices with single-object code-length caching.

#include <atomic>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "simdist/compress.hpp"

namespace simdist {

struct DataObject {
    std::string label;
    Bytes bytes;
};

struct DistanceMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;  // symmetric, values[i][j] == values[j][i]

    std::size_t size() const { return labels.size(); }

    double at(std::size_t i, std::size_t j) const { return values[i][j]; }

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return i;
        throw std::invalid_argument("label not in matrix: " + label);
    }
};

struct NcdResult {
    double value = 0.0;
    bool out_of_range = false;  // value < 0 or > 1 + eps_max
};

// E_C(x,y) = C(xy) - min{C(x), C(y)}.
inline std::int64_t e_c(const Compressor& c, const Bytes& x, const Bytes& y) {
    return c.code_length(concat(x, y)) - std::min(c.code_length(x), c.code_length(y));
}

// E^+_C(x,y) = max{C(x), C(y)}, the normalizing denominator.
inline std::int64_t e_c_plus(const Compressor& c, const Bytes& x, const Bytes& y) {
    return std::max(c.code_length(x), c.code_length(y));
}

// NCD(x,y) = (C(xy) - min{C(x),C(y)}) / max{C(x),C(y)}. Raw, unclamped;
// the out_of_range flag records compressor pathologies.
inline NcdResult ncd(const Compressor& c, const Bytes& x, const Bytes& y,
                     double eps_max = 0.2) {
    std::int64_t cx = c.code_length(x);
    std::int64_t cy = c.code_length(y);
    std::int64_t den = std::max(cx, cy);
    if (den <= 0) throw std::invalid_argument("ncd: both objects compress to 0 bits");
    std::int64_t cxy = c.code_length(concat(x, y));
    NcdResult r;
    r.value = static_cast<double>(cxy - std::min(cx, cy)) / static_cast<double>(den);
    r.out_of_range = r.value < 0.0 || r.value > 1.0 + eps_max;
    return r;
}

struct MatrixOptions {
    double eps_max = 0.2;
    bool clamp = false;       // clamp entries into [0,1] when set
    unsigned workers = 0;     // 0 = hardware concurrency
};

// All-pairs NCD matrix. Each C(x) computed once; concatenation lengths
// computed per unordered pair, distributed across workers. Deterministic
// regardless of scheduling.
inline DistanceMatrix distance_matrix(const Compressor& c,
                                      const std::vector<DataObject>& objects,
                                      const MatrixOptions& opt = {}) {
    const std::size_t n = objects.size();
    if (n < 2) throw std::invalid_argument("distance_matrix: need at least 2 objects");
    {
        std::set<std::string> seen;
        for (const auto& o : objects)
            if (!seen.insert(o.label).second)
                throw std::invalid_argument("distance_matrix: duplicate label " + o.label);
    }

    std::vector<std::int64_t> single(n);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) pairs.emplace_back(i, j);

    DistanceMatrix m;
    m.labels.reserve(n);
    for (const auto& o : objects) m.labels.push_back(o.label);
    m.values.assign(n, std::vector<double>(n, 0.0));

    unsigned workers = opt.workers ? opt.workers : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;

    for (std::size_t i = 0; i < n; ++i) single[i] = 0;
    {
        std::atomic<std::size_t> next{0};
        auto singles = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                single[i] = c.code_length(objects[i].bytes);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(singles);
        singles();
        for (auto& t : pool) t.join();
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t p = next.fetch_add(1);
            if (p >= pairs.size()) return;
            auto [i, j] = pairs[p];
            std::int64_t den = std::max(single[i], single[j]);
            if (den <= 0)
                throw std::invalid_argument("distance_matrix: zero-bit object " +
                                            objects[i].label);
            std::int64_t cxy = c.code_length(concat(objects[i].bytes, objects[j].bytes));
            double v = static_cast<double>(cxy - std::min(single[i], single[j])) /
                       static_cast<double>(den);
            if (opt.clamp) v = std::min(1.0, std::max(0.0, v));
            m.values[i][j] = v;
            m.values[j][i] = v;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return m;
}

}  // namespace simdist
