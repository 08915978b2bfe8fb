#pragma once

// Quartet-method tree fitting: consistent quartet topologies, tree cost
// as the sum of embedded quartet costs, the standardized benefit score
// S(T) = (M - C_T)/(M - m), randomized hill-climbing over mutation
// sequences, and a brute-force oracle for small n.

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "simdist/ncd.hpp"
#include "simdist/tree.hpp"

namespace simdist {

// Pairing p of quartet leaves (q0,q1,q2,q3):
//   0 -> q0q1|q2q3, 1 -> q0q2|q1q3, 2 -> q0q3|q1q2.
struct QuartetTopology {
    std::array<std::size_t, 4> leaves;
    int pairing;
};

inline std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>
pairing_sides(const QuartetTopology& t) {
    const auto& q = t.leaves;
    switch (t.pairing) {
        case 0: return {{q[0], q[1]}, {q[2], q[3]}};
        case 1: return {{q[0], q[2]}, {q[1], q[3]}};
        default: return {{q[0], q[3]}, {q[1], q[2]}};
    }
}

// The unique pairing ab|cd whose a-b and c-d paths are vertex-disjoint in
// the tree. With unit edge lengths that pairing strictly minimizes the
// topological distance sum, the other two sums being equal.
inline QuartetTopology consistent_topology(const TernaryTree& tree,
                                           const std::array<std::size_t, 4>& q,
                                           const std::vector<std::vector<int>>& ld) {
    for (std::size_t x : q)
        if (x >= tree.leaf_count())
            throw std::invalid_argument("consistent_topology: not a leaf index");
    int s0 = ld[q[0]][q[1]] + ld[q[2]][q[3]];
    int s1 = ld[q[0]][q[2]] + ld[q[1]][q[3]];
    int s2 = ld[q[0]][q[3]] + ld[q[1]][q[2]];
    int pairing = 0;
    if (s1 < s0 && s1 <= s2) pairing = 1;
    if (s2 < s0 && s2 < s1) pairing = 2;
    return {q, pairing};
}

inline QuartetTopology consistent_topology(const TernaryTree& tree,
                                           const std::array<std::size_t, 4>& q) {
    return consistent_topology(tree, q, tree.leaf_distances());
}

inline QuartetTopology consistent_topology(const TernaryTree& tree,
                                           const std::array<std::string, 4>& labels) {
    std::array<std::size_t, 4> q{};
    const auto& ls = tree.labels();
    for (int i = 0; i < 4; ++i) {
        auto it = std::find(ls.begin(), ls.end(), labels[i]);
        if (it == ls.end())
            throw std::invalid_argument("consistent_topology: unknown leaf " + labels[i]);
        q[i] = static_cast<std::size_t>(it - ls.begin());
    }
    return consistent_topology(tree, q);
}

// Cost of a quartet topology ab|cd against the matrix: d(a,b) + d(c,d).
inline double topology_cost(const DistanceMatrix& m, const QuartetTopology& t) {
    auto [ab, cd] = pairing_sides(t);
    return m.at(ab.first, ab.second) + m.at(cd.first, cd.second);
}

inline double tree_cost(const TernaryTree& tree, const DistanceMatrix& m) {
    const std::size_t n = tree.leaf_count();
    if (n != m.size() || tree.labels() != m.labels)
        throw std::invalid_argument("tree_cost: tree leaves do not match matrix labels");
    auto ld = tree.leaf_distances();
    double total = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d)
                    total += topology_cost(m, consistent_topology(tree, {a, b, c, d}, ld));
    return total;
}

// Sum over quartets of the min (resp. max) pairing cost: the S(T) anchors.
struct ScoreBounds {
    double m = 0.0;  // best achievable
    double M = 0.0;  // worst achievable
};

inline ScoreBounds score_bounds(const DistanceMatrix& mat) {
    const std::size_t n = mat.size();
    ScoreBounds sb;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    double s0 = mat.at(a, b) + mat.at(c, d);
                    double s1 = mat.at(a, c) + mat.at(b, d);
                    double s2 = mat.at(a, d) + mat.at(b, c);
                    sb.m += std::min({s0, s1, s2});
                    sb.M += std::max({s0, s1, s2});
                }
    return sb;
}

inline double st_from_cost(double cost, const ScoreBounds& sb) {
    if (sb.M == sb.m) return 1.0;
    return (sb.M - cost) / (sb.M - sb.m);
}

inline double st_score(const TernaryTree& tree, const DistanceMatrix& m) {
    return st_from_cost(tree_cost(tree, m), score_bounds(m));
}

// --- mutation ----------------------------------------------------------------

// Number of elementary mutations per step: P(k) proportional to 1/k^2,
// truncated at k_max, sampled by inverse CDF.
inline std::size_t fat_tail_length(std::size_t k_max, std::mt19937_64& rng) {
    double z = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) z += 1.0 / (static_cast<double>(k) * k);
    std::uniform_real_distribution<double> u(0.0, z);
    double r = u(rng), acc = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        acc += 1.0 / (static_cast<double>(k) * k);
        if (r <= acc) return k;
    }
    return k_max;
}

namespace detail {

inline bool contains(const std::vector<std::size_t>& v, std::size_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

// Swap the attachment points of two leaves.
inline bool mutate_leaf_swap(TernaryTree& t, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, t.leaf_count() - 1);
    std::size_t a = pick(rng), b = pick(rng);
    if (a == b) return false;
    std::size_t pa = t.neighbors(a)[0], pb = t.neighbors(b)[0];
    if (pa == pb) return false;
    t.remove_edge(a, pa);
    t.remove_edge(b, pb);
    t.add_edge(a, pb);
    t.add_edge(b, pa);
    return true;
}

// Exchange two disjoint, non-nested subtrees.
inline bool mutate_subtree_swap(TernaryTree& t, std::mt19937_64& rng) {
    auto es = t.edges();
    std::uniform_int_distribution<std::size_t> pick(0, es.size() - 1);
    auto [a1, b1] = es[pick(rng)];
    auto [a2, b2] = es[pick(rng)];
    // Orient each edge: (u, v) with v the subtree root.
    std::uniform_int_distribution<int> flip(0, 1);
    std::size_t u1 = a1, v1 = b1, u2 = a2, v2 = b2;
    if (flip(rng)) std::swap(u1, v1);
    if (flip(rng)) std::swap(u2, v2);
    if (std::min(u1, v1) == std::min(u2, v2) && std::max(u1, v1) == std::max(u2, v2))
        return false;
    auto s1 = t.nodes_beyond(u1, v1);
    if (contains(s1, v2)) return false;
    auto s2 = t.nodes_beyond(u2, v2);
    if (contains(s2, v1)) return false;
    t.remove_edge(u1, v1);
    t.remove_edge(u2, v2);
    t.add_edge(u1, v2);
    t.add_edge(u2, v1);
    return true;
}

// Detach the subtree hanging off (u, v) at v, splice u out, reattach by
// subdividing a random remaining edge with u.
inline bool mutate_spr(TernaryTree& t, std::mt19937_64& rng) {
    if (t.leaf_count() < 5) return false;
    auto es = t.edges();
    std::uniform_int_distribution<std::size_t> pick(0, es.size() - 1);
    auto [x, y] = es[pick(rng)];
    std::uniform_int_distribution<int> flip(0, 1);
    std::size_t u = x, v = y;
    if (flip(rng)) std::swap(u, v);
    if (t.is_leaf(u)) return false;  // u must be internal to splice out
    auto moved = t.nodes_beyond(u, v);

    t.remove_edge(u, v);
    std::size_t p = t.neighbors(u)[0], q = t.neighbors(u)[1];
    t.remove_edge(u, p);
    t.remove_edge(u, q);
    t.add_edge(p, q);

    // Candidate reattachment edges: outside the moved subtree, not (p,q)
    // when that would just restore the original position.
    std::vector<std::pair<std::size_t, std::size_t>> cand;
    for (auto [e1, e2] : t.edges()) {
        if (contains(moved, e1) || contains(moved, e2)) continue;
        if ((e1 == std::min(p, q) && e2 == std::max(p, q))) continue;
        cand.emplace_back(e1, e2);
    }
    if (cand.empty()) {
        // Undo splice; caller redraws.
        t.remove_edge(p, q);
        t.add_edge(u, p);
        t.add_edge(u, q);
        t.add_edge(u, v);
        return false;
    }
    std::uniform_int_distribution<std::size_t> pick2(0, cand.size() - 1);
    auto [r, s] = cand[pick2(rng)];
    t.remove_edge(r, s);
    t.add_edge(r, u);
    t.add_edge(u, s);
    t.add_edge(u, v);
    return true;
}

inline void one_mutation(TernaryTree& t, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 2);
    for (;;) {
        bool ok = false;
        switch (kind(rng)) {
            case 0: ok = mutate_leaf_swap(t, rng); break;
            case 1: ok = mutate_subtree_swap(t, rng); break;
            default: ok = mutate_spr(t, rng); break;
        }
        if (ok) return;
    }
}

}  // namespace detail

// One search step: a sequence of k elementary mutations, k fat-tailed.
inline TernaryTree mutate(const TernaryTree& tree, std::mt19937_64& rng) {
    TernaryTree t = tree;
    std::size_t k = fat_tail_length(2 * tree.leaf_count(), rng);
    for (std::size_t i = 0; i < k; ++i) detail::one_mutation(t, rng);
    return t;
}

// --- search --------------------------------------------------------------------

struct SearchConfig {
    std::uint64_t seed = 1;
    unsigned runs = 1;              // R parallel hill-climbers
    std::size_t max_steps = 20000;  // mutation attempts per run
    bool agreement_termination = true;
    std::size_t agreement_interval = 200;
};

struct TraceEntry {
    std::size_t step;
    double cost;
    double st;
};

struct SearchResult {
    TernaryTree tree;
    double st = 0.0;
    double cost = 0.0;
    std::vector<TraceEntry> trace;  // accepted moves of the winning run
    bool agreed = false;
};

namespace detail {

inline std::mt19937_64 run_rng(std::uint64_t seed, unsigned run_index) {
    std::uint64_t mix[2] = {seed, run_index + 0x9e3779b97f4a7c15ull};
    std::seed_seq sq(mix, mix + 2);
    return std::mt19937_64(sq);
}

}  // namespace detail

// Randomized parallel hill-climbing: R independent climbers from random
// trees, accepting a mutated tree iff it strictly lowers tree cost. With
// agreement termination on, all runs stop once every current best agrees
// on S(T) (within 1e-9) and on topology (equal bipartition sets).
inline SearchResult search(const DistanceMatrix& matrix, const SearchConfig& cfg) {
    const std::size_t n = matrix.size();
    if (n < 4) throw std::invalid_argument("search: need at least 4 objects");
    if (cfg.runs < 1 || cfg.max_steps == 0)
        throw std::invalid_argument("search: runs >= 1 and budget > 0 required");

    const ScoreBounds sb = score_bounds(matrix);

    struct RunState {
        std::unique_ptr<TernaryTree> best;
        double cost = std::numeric_limits<double>::infinity();
        std::vector<TraceEntry> trace;
        bool done = false;
    };
    std::vector<RunState> runs(cfg.runs);
    std::mutex mon;
    std::atomic<bool> stop{false};

    auto climber = [&](unsigned ri) {
        auto rng = detail::run_rng(cfg.seed, ri);
        TernaryTree cur = TernaryTree::random(matrix.labels, rng);
        double cur_cost = tree_cost(cur, matrix);
        {
            std::lock_guard<std::mutex> lk(mon);
            runs[ri].best = std::make_unique<TernaryTree>(cur);
            runs[ri].cost = cur_cost;
            runs[ri].trace.push_back({0, cur_cost, st_from_cost(cur_cost, sb)});
        }
        for (std::size_t step = 1; step <= cfg.max_steps && !stop.load(); ++step) {
            TernaryTree cand = mutate(cur, rng);
            double cand_cost = tree_cost(cand, matrix);
            if (cand_cost < cur_cost) {
                cur = std::move(cand);
                cur_cost = cand_cost;
                std::lock_guard<std::mutex> lk(mon);
                runs[ri].best = std::make_unique<TernaryTree>(cur);
                runs[ri].cost = cur_cost;
                runs[ri].trace.push_back({step, cur_cost, st_from_cost(cur_cost, sb)});
            }
            if (cfg.agreement_termination && cfg.runs > 1 &&
                step % cfg.agreement_interval == 0) {
                std::lock_guard<std::mutex> lk(mon);
                bool agree = true;
                for (unsigned r = 0; r + 1 < cfg.runs && agree; ++r) {
                    if (!runs[r].best || !runs[r + 1].best) { agree = false; break; }
                    double st_a = st_from_cost(runs[r].cost, sb);
                    double st_b = st_from_cost(runs[r + 1].cost, sb);
                    if (std::abs(st_a - st_b) > 1e-9 ||
                        !runs[r].best->same_topology(*runs[r + 1].best))
                        agree = false;
                }
                if (agree) stop.store(true);
            }
        }
        std::lock_guard<std::mutex> lk(mon);
        runs[ri].done = true;
    };

    if (cfg.runs == 1) {
        climber(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned r = 0; r < cfg.runs; ++r) pool.emplace_back(climber, r);
        for (auto& t : pool) t.join();
    }

    unsigned best_run = 0;
    for (unsigned r = 1; r < cfg.runs; ++r)
        if (runs[r].cost < runs[best_run].cost) best_run = r;

    SearchResult res{*runs[best_run].best, st_from_cost(runs[best_run].cost, sb),
                     runs[best_run].cost, std::move(runs[best_run].trace),
                     stop.load()};
    return res;
}

// --- brute force oracle ---------------------------------------------------------

// Enumerates all (2n-5)!! unrooted ternary topologies and returns the
// global minimum-cost tree. Finding the optimal tree is NP-hard; this is
// only feasible for n <= 8.
inline std::pair<TernaryTree, double> brute_force_best(const DistanceMatrix& matrix) {
    const std::size_t n = matrix.size();
    if (n < 4 || n > 8)
        throw std::invalid_argument("brute_force_best: n must be in [4, 8]");

    const ScoreBounds sb = score_bounds(matrix);
    double best_cost = std::numeric_limits<double>::infinity();
    std::unique_ptr<TernaryTree> best;
    std::size_t count = 0;

    TernaryTree base(matrix.labels);
    base.add_edge(0, n);
    base.add_edge(1, n);
    base.add_edge(2, n);

    // Recursive leaf insertion over every edge.
    auto rec = [&](auto&& self, TernaryTree& t, std::size_t leaf) -> void {
        if (leaf == n) {
            ++count;
            double c = tree_cost(t, matrix);
            if (c < best_cost) {
                best_cost = c;
                best = std::make_unique<TernaryTree>(t);
            }
            return;
        }
        std::size_t mid = n + leaf - 2;
        for (auto [u, v] : t.edges()) {
            t.remove_edge(u, v);
            t.add_edge(u, mid);
            t.add_edge(mid, v);
            t.add_edge(mid, leaf);
            self(self, t, leaf + 1);
            t.remove_edge(u, mid);
            t.remove_edge(mid, v);
            t.remove_edge(mid, leaf);
            t.add_edge(u, v);
        }
    };
    rec(rec, base, 3);
    (void)count;
    return {*best, st_from_cost(best_cost, sb)};
}

// Number of distinct unrooted ternary topologies on n leaves: (2n-5)!!.
inline std::uint64_t topology_count(std::size_t n) {
    std::uint64_t c = 1;
    for (std::size_t k = 3; k < n; ++k) c *= 2 * (k + 1) - 5;
    return c;
}

}  // namespace simdist
