#pragma once

// Readers/writers shared by all modules: distance matrices, Newick/DOT
// trees, search traces, corpora, count caches, anchors, labeled term
// lists, and SVM models. Plain-text TSV throughout, UTF-8, LF endings.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "simdist/ngd.hpp"
#include "simdist/quartet.hpp"
#include "simdist/svm.hpp"
#include "simdist/tree.hpp"

namespace simdist {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == '\t') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace detail

// --- distance matrix ---------------------------------------------------------
//
// Header `#simdist-matrix v1 n=<n>`, then n rows `label<TAB>v1<TAB>...<TAB>vn`
// with 6 decimal places.

inline void write_matrix(std::ostream& os, const DistanceMatrix& m) {
    os << "#simdist-matrix v1 n=" << m.size() << "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        os << m.labels[i];
        for (std::size_t j = 0; j < m.size(); ++j)
            os << '\t' << detail::fixed6(m.values[i][j]);
        os << '\n';
    }
}

inline void write_matrix(const std::string& path, const DistanceMatrix& m) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open for writing: " + path);
    write_matrix(os, m);
}

inline DistanceMatrix read_matrix(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("matrix: empty input (line 1)");
    std::size_t n = 0;
    if (std::sscanf(line.c_str(), "#simdist-matrix v1 n=%zu", &n) != 1 || n < 1)
        throw ParseError("matrix: malformed header (line 1): " + line);

    DistanceMatrix m;
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(is, line))
            throw ParseError("matrix: missing row (line " + std::to_string(i + 2) + ")");
        auto cells = detail::split_tabs(line);
        if (cells.size() != n + 1)
            throw ParseError("matrix: ragged row, got " + std::to_string(cells.size() - 1) +
                             " values, want " + std::to_string(n) + " (line " +
                             std::to_string(i + 2) + ")");
        m.labels.push_back(cells[0]);
        for (std::size_t j = 0; j < n; ++j) {
            try {
                std::size_t used = 0;
                m.values[i][j] = std::stod(cells[j + 1], &used);
                if (used != cells[j + 1].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParseError("matrix: non-numeric cell '" + cells[j + 1] + "' (line " +
                                 std::to_string(i + 2) + ")");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m.values[i][j] - m.values[j][i]) > 5e-7)
                throw ParseError("matrix: asymmetric entries at (" + m.labels[i] + ", " +
                                 m.labels[j] + "): " + detail::fixed6(m.values[i][j]) +
                                 " vs " + detail::fixed6(m.values[j][i]));
    {
        std::set<std::string> seen(m.labels.begin(), m.labels.end());
        if (seen.size() != n) throw ParseError("matrix: duplicate labels");
    }
    return m;
}

inline DistanceMatrix read_matrix(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open: " + path);
    return read_matrix(is);
}

// --- Newick -------------------------------------------------------------------
//
// Leaf labels only, no branch lengths, unrooted convention (trifurcating
// top level), trailing comment line `[S(T)=<value>]` with 3 decimals.

namespace detail {

inline void newick_subtree(std::ostream& os, const TernaryTree& t, std::size_t v,
                           std::size_t parent) {
    if (t.is_leaf(v)) {
        os << t.labels()[v];
        return;
    }
    os << '(';
    bool first = true;
    for (std::size_t w : t.neighbors(v)) {
        if (w == parent) continue;
        if (!first) os << ',';
        first = false;
        newick_subtree(os, t, w, v);
    }
    os << ')';
}

}  // namespace detail

inline std::string write_newick(const TernaryTree& t, double s_t) {
    // Root the traversal at the internal node next to leaf 0.
    std::size_t root = t.neighbors(0)[0];
    std::ostringstream os;
    os << '(' << t.labels()[0] << ',';
    bool first = true;
    for (std::size_t w : t.neighbors(root)) {
        if (w == 0) continue;
        if (!first) os << ',';
        first = false;
        detail::newick_subtree(os, t, w, root);
    }
    os << ");\n";
    char buf[48];
    std::snprintf(buf, sizeof buf, "[S(T)=%.3f]\n", s_t);
    os << buf;
    return os.str();
}

// Parsed Newick as label-based bipartitions, for topology comparison.
struct ParsedNewick {
    std::set<std::string> leaves;
    // Each nontrivial bipartition canonicalized as the side not containing
    // the lexicographically smallest leaf.
    std::set<std::set<std::string>> bipartitions;
    double s_t = -1.0;  // from the trailing comment, if present
};

namespace detail {

struct NewickNode {
    std::string label;
    std::vector<NewickNode> children;
};

inline NewickNode parse_newick_node(const std::string& s, std::size_t& pos) {
    NewickNode node;
    if (pos < s.size() && s[pos] == '(') {
        ++pos;
        for (;;) {
            node.children.push_back(parse_newick_node(s, pos));
            if (pos >= s.size()) throw ParseError("newick: unterminated group");
            if (s[pos] == ',') {
                ++pos;
                continue;
            }
            if (s[pos] == ')') {
                ++pos;
                break;
            }
            throw ParseError("newick: unexpected character at " + std::to_string(pos));
        }
    } else {
        while (pos < s.size() && s[pos] != ',' && s[pos] != ')' && s[pos] != ';' &&
               s[pos] != '(')
            node.label.push_back(s[pos++]);
        if (node.label.empty()) throw ParseError("newick: empty label at " + std::to_string(pos));
    }
    return node;
}

inline std::set<std::string> collect_leaves(const NewickNode& n,
                                            std::vector<std::set<std::string>>& clades) {
    if (n.children.empty()) return {n.label};
    std::set<std::string> all;
    for (const auto& c : n.children) {
        auto sub = collect_leaves(c, clades);
        all.insert(sub.begin(), sub.end());
    }
    clades.push_back(all);
    return all;
}

}  // namespace detail

inline ParsedNewick parse_newick(const std::string& text) {
    std::size_t pos = 0;
    auto root = detail::parse_newick_node(text, pos);
    if (pos >= text.size() || text[pos] != ';') throw ParseError("newick: missing ';'");
    ++pos;

    ParsedNewick out;
    std::vector<std::set<std::string>> clades;
    out.leaves = detail::collect_leaves(root, clades);
    if (out.leaves.empty()) throw ParseError("newick: no leaves");
    const std::string& smallest = *out.leaves.begin();
    for (auto& c : clades) {
        if (c.size() < 2 || c.size() > out.leaves.size() - 2) continue;
        if (c.count(smallest)) {
            std::set<std::string> flip;
            for (const auto& l : out.leaves)
                if (!c.count(l)) flip.insert(l);
            out.bipartitions.insert(flip);
        } else {
            out.bipartitions.insert(c);
        }
    }

    auto b = text.find("[S(T)=", pos);
    if (b != std::string::npos) {
        auto e = text.find(']', b);
        if (e != std::string::npos) out.s_t = std::stod(text.substr(b + 6, e - b - 6));
    }
    return out;
}

// Label-based bipartition set for a TernaryTree, in the parse_newick
// canonical form.
inline std::set<std::set<std::string>> label_bipartitions(const TernaryTree& t) {
    std::set<std::set<std::string>> out;
    const std::string smallest = *std::min_element(t.labels().begin(), t.labels().end());
    for (const auto& bip : t.bipartitions()) {
        std::set<std::string> side;
        for (std::size_t i : bip) side.insert(t.labels()[i]);
        if (side.count(smallest)) {
            std::set<std::string> flip;
            for (const auto& l : t.labels())
                if (!side.count(l)) flip.insert(l);
            out.insert(flip);
        } else {
            out.insert(side);
        }
    }
    return out;
}

// --- DOT -----------------------------------------------------------------------

inline std::string write_dot(const TernaryTree& t, double s_t) {
    std::ostringstream os;
    os << "graph simdist_tree {\n";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", s_t);
    os << "  label=\"S(T)=" << buf << "\";\n";
    for (std::size_t v = 0; v < t.node_count(); ++v) {
        if (t.is_leaf(v))
            os << "  n" << v << " [shape=box,label=\"" << t.labels()[v] << "\"];\n";
        else
            os << "  n" << v << " [shape=point];\n";
    }
    for (auto [u, v] : t.edges()) os << "  n" << u << " -- n" << v << ";\n";
    os << "}\n";
    return os.str();
}

// --- search trace ----------------------------------------------------------------

inline void write_trace(std::ostream& os, const std::vector<TraceEntry>& trace) {
    os << "step\tcost\tst\n";
    for (const auto& e : trace) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%zu\t%.9f\t%.9f\n", e.step, e.cost, e.st);
        os << buf;
    }
}

// --- corpus loading ----------------------------------------------------------------

// Directory of plain-text files (one document per file, sorted by name)
// or a single file with one document per line.
inline std::vector<std::string> load_corpus(const std::string& path) {
    namespace fs = std::filesystem;
    std::vector<std::string> docs;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f);
            std::ostringstream ss;
            ss << in.rdbuf();
            docs.push_back(ss.str());
        }
    } else {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open corpus: " + path);
        std::string line;
        while (std::getline(in, line)) docs.push_back(line);
    }
    if (docs.empty()) throw ParseError("corpus is empty: " + path);
    return docs;
}

// --- corpus provider file -------------------------------------------------------
//
// `#simdist-corpus v1 M=<m> N=<n> alpha=<a>`, then one posting list per
// term: `term<TAB>docid,docid,...`.

inline void write_corpus_index(const std::string& path, const CorpusIndex& idx) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open for writing: " + path);
    char buf[128];
    std::snprintf(buf, sizeof buf, "#simdist-corpus v1 M=%.0f N=%.0f alpha=%.0f\n",
                  idx.universe(), idx.normalizer(), idx.alpha());
    os << buf;
    for (const auto& [term, docs] : idx.postings()) {
        os << term << '\t';
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (i) os << ',';
            os << docs[i];
        }
        os << '\n';
    }
}

inline CorpusIndex read_corpus_index(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw ParseError("corpus index: empty file");
    double m = 0, n = 0, alpha = 0;
    if (std::sscanf(line.c_str(), "#simdist-corpus v1 M=%lf N=%lf alpha=%lf", &m, &n,
                    &alpha) != 3)
        throw ParseError("corpus index: malformed header: " + line);
    std::map<std::string, std::vector<std::uint32_t>> postings;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_tabs(line);
        if (cells.size() != 2)
            throw ParseError("corpus index: malformed line " + std::to_string(lineno));
        std::vector<std::uint32_t> docs;
        std::istringstream ds(cells[1]);
        std::string id;
        while (std::getline(ds, id, ',')) docs.push_back(static_cast<std::uint32_t>(std::stoul(id)));
        postings[cells[0]] = std::move(docs);
    }
    return CorpusIndex(std::move(postings), m, n, alpha);
}

// --- term lists ----------------------------------------------------------------

// One term per line; duplicates rejected.
inline std::vector<std::string> read_term_list(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open: " + path);
    std::vector<std::string> terms;
    std::set<std::string> seen;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (!seen.insert(line).second)
            throw ParseError("term list: duplicate term " + line);
        terms.push_back(line);
    }
    if (terms.empty()) throw ParseError("term list is empty: " + path);
    return terms;
}

// `label<TAB>term` per line.
inline std::vector<std::pair<std::string, std::string>> read_labeled_terms(
    const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open: " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_tabs(line);
        if (cells.size() != 2)
            throw ParseError("labeled terms: want label<TAB>term (line " +
                             std::to_string(lineno) + ")");
        out.emplace_back(cells[0], cells[1]);
    }
    if (out.empty()) throw ParseError("labeled terms file is empty: " + path);
    return out;
}

// --- SVM model -----------------------------------------------------------------
//
// Versioned flat file, bit-exact round trip (hexfloat reals).

inline void write_model(const std::string& path, const SvmModel& m) {
    std::ofstream os(path);
    if (!os) throw ParseError("cannot open for writing: " + path);
    os << "#simdist-svm v1\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "gamma\t%a\ncost\t%a\nbias\t%a\n", m.gamma, m.cost,
                  m.bias);
    os << buf;
    os << "labels\t" << m.positive_label << '\t' << m.negative_label << '\n';
    os << "sv_count\t" << m.support_vectors.size() << '\n';
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%a", m.dual_coef[i]);
        os << buf;
        for (double v : m.support_vectors[i]) {
            std::snprintf(buf, sizeof buf, "\t%a", v);
            os << buf;
        }
        os << '\n';
    }
}

inline SvmModel read_model(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "#simdist-svm v1")
        throw ParseError("model: bad header");
    SvmModel m;
    auto next_kv = [&](const char* key) {
        if (!std::getline(is, line)) throw ParseError("model: truncated");
        auto cells = detail::split_tabs(line);
        if (cells.size() < 2 || cells[0] != key)
            throw ParseError(std::string("model: expected ") + key);
        return cells;
    };
    m.gamma = std::strtod(next_kv("gamma")[1].c_str(), nullptr);
    m.cost = std::strtod(next_kv("cost")[1].c_str(), nullptr);
    m.bias = std::strtod(next_kv("bias")[1].c_str(), nullptr);
    auto labels = next_kv("labels");
    if (labels.size() != 3) throw ParseError("model: bad labels line");
    m.positive_label = labels[1];
    m.negative_label = labels[2];
    std::size_t count = std::stoul(next_kv("sv_count")[1]);
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(is, line)) throw ParseError("model: missing support vector");
        auto cells = detail::split_tabs(line);
        if (cells.size() < 2) throw ParseError("model: bad support vector line");
        m.dual_coef.push_back(std::strtod(cells[0].c_str(), nullptr));
        std::vector<double> sv;
        for (std::size_t j = 1; j < cells.size(); ++j)
            sv.push_back(std::strtod(cells[j].c_str(), nullptr));
        m.support_vectors.push_back(std::move(sv));
    }
    return m;
}

}  // namespace simdist
