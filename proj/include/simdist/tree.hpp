#pragma once

// Unrooted ternary trees: n leaves, n-2 internal nodes, every internal
// node of degree exactly 3. Nodes 0..n-1 are leaves (in label order),
// nodes n..2n-3 are internal.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace simdist {

class TernaryTree {
public:
    explicit TernaryTree(std::vector<std::string> leaf_labels)
        : labels_(std::move(leaf_labels)) {
        if (labels_.size() < 4)
            throw std::invalid_argument("TernaryTree: need at least 4 leaves");
        adj_.assign(node_count(), {});
    }

    std::size_t leaf_count() const { return labels_.size(); }
    std::size_t node_count() const { return 2 * labels_.size() - 2; }
    bool is_leaf(std::size_t v) const { return v < labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }

    const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_[v]; }

    void add_edge(std::size_t u, std::size_t v) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    void remove_edge(std::size_t u, std::size_t v) {
        erase_from(adj_[u], v);
        erase_from(adj_[v], u);
    }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        for (std::size_t u = 0; u < adj_.size(); ++u)
            for (std::size_t v : adj_[u])
                if (u < v) e.emplace_back(u, v);
        return e;
    }

    // Degree/connectivity/acyclicity validator.
    bool valid() const {
        const std::size_t n = leaf_count();
        std::size_t edge_total = 0;
        for (std::size_t v = 0; v < node_count(); ++v) {
            std::size_t want = is_leaf(v) ? 1 : 3;
            if (adj_[v].size() != want) return false;
            edge_total += adj_[v].size();
        }
        if (edge_total != 2 * (node_count() - 1)) return false;
        // Connectivity: BFS reaches every node.
        std::vector<char> seen(node_count(), 0);
        std::queue<std::size_t> q;
        q.push(0);
        seen[0] = 1;
        std::size_t reached = 1;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop();
            for (std::size_t w : adj_[u])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    q.push(w);
                }
        }
        return reached == node_count() && n >= 4;
    }

    // Topological (unit-edge) distances from every leaf to every node.
    // dist[leaf][node].
    std::vector<std::vector<int>> leaf_distances() const {
        std::vector<std::vector<int>> d(leaf_count());
        for (std::size_t s = 0; s < leaf_count(); ++s) {
            d[s].assign(node_count(), -1);
            std::queue<std::size_t> q;
            q.push(s);
            d[s][s] = 0;
            while (!q.empty()) {
                std::size_t u = q.front();
                q.pop();
                for (std::size_t w : adj_[u])
                    if (d[s][w] < 0) {
                        d[s][w] = d[s][u] + 1;
                        q.push(w);
                    }
            }
        }
        return d;
    }

    // Set of nontrivial leaf bipartitions, one per internal edge. Each
    // bipartition is the lexicographically smaller side, as a sorted
    // leaf-index vector. Canonical form for tree isomorphism.
    std::set<std::vector<std::size_t>> bipartitions() const {
        std::set<std::vector<std::size_t>> bips;
        for (auto [u, v] : edges()) {
            if (is_leaf(u) || is_leaf(v)) continue;
            auto side = leaves_beyond(u, v);
            std::sort(side.begin(), side.end());
            auto other = complement_leaves(side);
            bips.insert(std::min(side, other));
        }
        return bips;
    }

    // Leaves in the component containing v after removing edge (u,v).
    std::vector<std::size_t> leaves_beyond(std::size_t u, std::size_t v) const {
        std::vector<std::size_t> out;
        std::vector<char> seen(node_count(), 0);
        seen[u] = 1;
        std::queue<std::size_t> q;
        q.push(v);
        seen[v] = 1;
        while (!q.empty()) {
            std::size_t w = q.front();
            q.pop();
            if (is_leaf(w)) out.push_back(w);
            for (std::size_t z : adj_[w])
                if (!seen[z]) {
                    seen[z] = 1;
                    q.push(z);
                }
        }
        return out;
    }

    // All nodes (not just leaves) in the component containing v after
    // removing edge (u,v).
    std::vector<std::size_t> nodes_beyond(std::size_t u, std::size_t v) const {
        std::vector<std::size_t> out;
        std::vector<char> seen(node_count(), 0);
        seen[u] = 1;
        std::queue<std::size_t> q;
        q.push(v);
        seen[v] = 1;
        while (!q.empty()) {
            std::size_t w = q.front();
            q.pop();
            out.push_back(w);
            for (std::size_t z : adj_[w])
                if (!seen[z]) {
                    seen[z] = 1;
                    q.push(z);
                }
        }
        return out;
    }

    bool same_topology(const TernaryTree& other) const {
        return labels_ == other.labels_ && bipartitions() == other.bipartitions();
    }

    // Random ternary tree by sequential leaf insertion into a random edge.
    static TernaryTree random(std::vector<std::string> leaf_labels, std::mt19937_64& rng) {
        TernaryTree t(std::move(leaf_labels));
        const std::size_t n = t.leaf_count();
        // Start: internal node n joined to leaves 0,1,2.
        t.add_edge(0, n);
        t.add_edge(1, n);
        t.add_edge(2, n);
        for (std::size_t leaf = 3; leaf < n; ++leaf) {
            auto e = t.current_edges(leaf);
            std::uniform_int_distribution<std::size_t> pick(0, e.size() - 1);
            auto [u, v] = e[pick(rng)];
            std::size_t mid = n + leaf - 2;  // next unused internal node
            t.remove_edge(u, v);
            t.add_edge(u, mid);
            t.add_edge(mid, v);
            t.add_edge(mid, leaf);
        }
        return t;
    }

private:
    static void erase_from(std::vector<std::size_t>& vec, std::size_t x) {
        auto it = std::find(vec.begin(), vec.end(), x);
        if (it == vec.end()) throw std::logic_error("TernaryTree: edge not present");
        vec.erase(it);
    }

    // Edges among nodes already wired in (used during construction, when
    // only leaves < `leaf` and internals < n + leaf - 2 exist).
    std::vector<std::pair<std::size_t, std::size_t>> current_edges(std::size_t) const {
        return edges();
    }

    std::vector<std::size_t> complement_leaves(const std::vector<std::size_t>& side) const {
        std::vector<std::size_t> out;
        std::size_t k = 0;
        for (std::size_t i = 0; i < leaf_count(); ++i) {
            if (k < side.size() && side[k] == i)
                ++k;
            else
                out.push_back(i);
        }
        return out;
    }

    std::vector<std::string> labels_;
    std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace simdist
