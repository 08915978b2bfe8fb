#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>
#include <sstream>

#include "simdist/io_formats.hpp"
#include "simdist/synth.hpp"

using namespace simdist;

namespace {

DistanceMatrix tiny_matrix() {
    DistanceMatrix m;
    m.labels = {"u", "v"};
    m.values = {{0.0, 1.0}, {1.0, 0.0}};
    return m;
}

TernaryTree quad_tree() {
    TernaryTree t({"u", "v", "w", "x"});
    t.add_edge(0, 4);
    t.add_edge(1, 4);
    t.add_edge(4, 5);
    t.add_edge(2, 5);
    t.add_edge(3, 5);
    return t;
}

TernaryTree caterpillar5() {
    TernaryTree t({"a", "b", "c", "d", "e"});
    t.add_edge(0, 5);
    t.add_edge(1, 5);
    t.add_edge(5, 6);
    t.add_edge(2, 6);
    t.add_edge(6, 7);
    t.add_edge(3, 7);
    t.add_edge(4, 7);
    return t;
}

std::string temp_file(const char* tag) {
    auto p = std::filesystem::temp_directory_path() /
             (std::string("simdist-io-") + tag + "-" + std::to_string(::getpid()));
    return p.string();
}

}  // namespace

TEST_CASE("matrix writes and reads back equal") {
    auto m = tiny_matrix();
    std::stringstream ss;
    write_matrix(ss, m);
    auto back = read_matrix(ss);
    CHECK(back.labels == m.labels);
    CHECK(back.values == m.values);
}

TEST_CASE("matrix round trip keeps values within the format tolerance") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.1);
    DistanceMatrix m;
    const std::size_t n = 16;
    for (std::size_t i = 0; i < n; ++i) m.labels.push_back("obj" + std::to_string(i));
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m.values[i][j] = m.values[j][i] = u(rng);

    std::stringstream ss;
    write_matrix(ss, m);
    auto back = read_matrix(ss);
    REQUIRE(back.labels == m.labels);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            CHECK(std::abs(back.values[i][j] - m.values[i][j]) <= 5e-7);

    // Rewrite of the parsed matrix is byte-identical.
    std::stringstream ss2;
    write_matrix(ss2, back);
    std::stringstream ss3;
    write_matrix(ss3, m);
    CHECK(ss2.str() == ss3.str());
}

TEST_CASE("matrix parse errors carry locations") {
    std::stringstream bad_header("#wrong\n");
    CHECK_THROWS_AS(read_matrix(bad_header), ParseError);

    std::stringstream ragged("#simdist-matrix v1 n=2\nu\t0.0\nv\t0.0\t0.0\n");
    CHECK_THROWS_WITH(read_matrix(ragged), Catch::Matchers::ContainsSubstring("line 2"));

    std::stringstream nonnum("#simdist-matrix v1 n=2\nu\t0.0\tx\nv\t0.0\t0.0\n");
    CHECK_THROWS_WITH(read_matrix(nonnum), Catch::Matchers::ContainsSubstring("non-numeric"));

    std::stringstream asym(
        "#simdist-matrix v1 n=2\nu\t0.000000\t0.400000\nv\t0.500000\t0.000000\n");
    CHECK_THROWS_WITH(read_matrix(asym), Catch::Matchers::ContainsSubstring("asymmetric"));
}

TEST_CASE("newick writer emits the n=4 topology with the score comment") {
    auto text = write_newick(quad_tree(), 1.0);
    auto parsed = parse_newick(text);
    CHECK(parsed.leaves == std::set<std::string>{"u", "v", "w", "x"});
    CHECK(parsed.s_t == Catch::Approx(1.0));
    CHECK(parsed.bipartitions == label_bipartitions(quad_tree()));
    CHECK(text.find("[S(T)=1.000]") != std::string::npos);
}

TEST_CASE("caterpillar newick preserves both internal bipartitions") {
    auto t = caterpillar5();
    auto parsed = parse_newick(write_newick(t, 0.5));
    CHECK(parsed.bipartitions.size() == 2);
    CHECK(parsed.bipartitions == label_bipartitions(t));
}

TEST_CASE("random tree topologies survive the newick round trip") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        std::vector<std::string> labels;
        std::uniform_int_distribution<std::size_t> nn(4, 12);
        std::size_t n = nn(rng);
        for (std::size_t k = 0; k < n; ++k) labels.push_back("t" + std::to_string(k));
        auto t = TernaryTree::random(labels, rng);
        auto parsed = parse_newick(write_newick(t, 0.9));
        CHECK(parsed.leaves == std::set<std::string>(labels.begin(), labels.end()));
        CHECK(parsed.bipartitions == label_bipartitions(t));
    }
}

TEST_CASE("dot output renders leaves as boxes and internals as points") {
    auto s = write_dot(quad_tree(), 0.984);
    CHECK(s.find("shape=box,label=\"u\"") != std::string::npos);
    CHECK(s.find("shape=point") != std::string::npos);
    CHECK(s.find("S(T)=0.984") != std::string::npos);
}

TEST_CASE("trace TSV has a header and one row per accepted step") {
    std::stringstream ss;
    write_trace(ss, {{0, 5.0, 0.2}, {7, 4.0, 0.6}});
    std::string line;
    std::getline(ss, line);
    CHECK(line == "step\tcost\tst");
    std::getline(ss, line);
    CHECK(line.rfind("0\t5.0", 0) == 0);
    std::getline(ss, line);
    CHECK(line.rfind("7\t4.0", 0) == 0);
}

TEST_CASE("corpus index file round-trips counts and normalizer") {
    auto idx = CorpusIndex::from_texts({"a", "a", "a b", "a b", "b", "b", "", ""});
    auto path = temp_file("corpus");
    write_corpus_index(path, idx);
    auto back = read_corpus_index(path);
    CHECK(back.universe() == idx.universe());
    CHECK(back.normalizer() == idx.normalizer());
    CHECK(back.alpha() == idx.alpha());
    CHECK(back.count("a") == idx.count("a"));
    CHECK(back.pair_count("a", "b") == idx.pair_count("a", "b"));
    std::filesystem::remove(path);
}

TEST_CASE("term list loader rejects duplicates") {
    auto path = temp_file("terms");
    {
        std::ofstream os(path);
        os << "alpha\nbeta\nalpha\n";
    }
    CHECK_THROWS_AS(read_term_list(path), ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("svm model round-trips bit-exactly") {
    SvmModel m;
    m.gamma = 0.1237543;
    m.cost = 17.25;
    m.bias = -0.0032198477;
    m.positive_label = "pos";
    m.negative_label = "neg";
    m.support_vectors = {{0.1, 0.2, 0.3}, {1.5, -2.25, 3.0}};
    m.dual_coef = {0.75, -0.75};
    auto path = temp_file("model");
    write_model(path, m);
    auto back = read_model(path);
    CHECK(back.gamma == m.gamma);
    CHECK(back.cost == m.cost);
    CHECK(back.bias == m.bias);
    CHECK(back.positive_label == m.positive_label);
    CHECK(back.support_vectors == m.support_vectors);
    CHECK(back.dual_coef == m.dual_coef);
    std::filesystem::remove(path);
}

TEST_CASE("corpus loader reads one document per line from a file") {
    auto path = temp_file("lines");
    {
        std::ofstream os(path);
        os << "doc one\ndoc two\n";
    }
    auto docs = load_corpus(path);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0] == "doc one");
    std::filesystem::remove(path);
}

TEST_CASE("corpus loader reads one document per file from a directory") {
    auto dir = std::filesystem::temp_directory_path() /
               ("simdist-corpus-" + std::to_string(::getpid()));
    std::filesystem::create_directory(dir);
    std::ofstream(dir / "01.txt") << "first doc";
    std::ofstream(dir / "02.txt") << "second doc";
    auto docs = load_corpus(dir.string());
    REQUIRE(docs.size() == 2);
    CHECK(docs[0] == "first doc");
    CHECK(docs[1] == "second doc");
    std::filesystem::remove_all(dir);
}
