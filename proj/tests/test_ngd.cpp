#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "simdist/ngd.hpp"

using namespace simdist;

namespace {

// 8 docs; a in docs {1,2,3,4}, b in {3,4,5,6}; two docs with no terms.
CorpusIndex toy_corpus() {
    std::vector<std::string> docs = {"a", "a", "a b", "a b", "b", "b", "", ""};
    return CorpusIndex::from_texts(docs);
}

CountProvider& horse_rider(bool half_index) {
    static ManualCounts full({{"horse", 46700000.0}, {"rider", 12200000.0}},
                             {{{"horse", "rider"}, 2630000.0}}, 8058044651.0);
    static ManualCounts half({{"horse", 23700000.0}, {"rider", 6270000.0}},
                             {{{"horse", "rider"}, 1180000.0}}, 4285199774.0);
    return half_index ? static_cast<CountProvider&>(half) : full;
}

}  // namespace

TEST_CASE("toy corpus counts and normalizer") {
    auto idx = toy_corpus();
    CHECK(idx.count("a") == 4.0);
    CHECK(idx.count("b") == 4.0);
    CHECK(idx.pair_count("a", "b") == 2.0);
    CHECK(idx.universe() == 8.0);
    CHECK(idx.normalizer() == 10.0);  // |a| + |b| + |a ∩ b|
    CHECK(idx.pair_count("a", "a") == idx.count("a"));
}

TEST_CASE("toy distribution sums to one over its own normalizer") {
    auto idx = toy_corpus();
    GoogleDistribution g{idx.vocabulary(), &idx, idx.normalizer()};
    CHECK(g.g("a") == Catch::Approx(0.4));
    CHECK(g.g("b") == Catch::Approx(0.4));
    CHECK(g.g("a", "b") == Catch::Approx(0.2));
    CHECK(g.total_mass() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("single-document single-term universe") {
    auto idx = CorpusIndex::from_texts({"t"});
    CHECK(idx.count("t") == 1.0);
    CHECK(idx.universe() == 1.0);
    CHECK(idx.normalizer() == 1.0);
    GoogleDistribution g{idx.vocabulary(), &idx, idx.normalizer()};
    CHECK(g.g("t") == 1.0);
    CHECK(google_code(idx, "t", idx.normalizer()) == 0.0);
}

TEST_CASE("distribution normalization holds for random corpora") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> ndocs(1, 100), nterms(1, 12), term(0, 29);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> docs;
        int d = ndocs(rng);
        for (int i = 0; i < d; ++i) {
            std::string doc;
            int t = nterms(rng);
            for (int j = 0; j < t; ++j) doc += "t" + std::to_string(term(rng)) + " ";
            docs.push_back(doc.empty() ? "t0" : doc);
        }
        auto idx = CorpusIndex::from_texts(docs);
        GoogleDistribution g{idx.vocabulary(), &idx, idx.normalizer()};
        CHECK(g.total_mass() == Catch::Approx(1.0).margin(1e-9));
        CHECK(idx.normalizer() >= idx.universe());
        CHECK(idx.normalizer() <= idx.alpha() * idx.universe());
    }
}

TEST_CASE("empty corpus is rejected") {
    CHECK_THROWS_AS(CorpusIndex::from_texts({}), std::invalid_argument);
}

TEST_CASE("horse/rider worked example") {
    CHECK(ngd(horse_rider(false), "horse", "rider", 8058044651.0) ==
          Catch::Approx(0.443).margin(0.0005));
    CHECK(ngd(horse_rider(true), "horse", "rider", 4285199774.0) ==
          Catch::Approx(0.460).margin(0.0005));
}

TEST_CASE("ngd of a term with itself is exactly zero") {
    auto idx = toy_corpus();
    CHECK(ngd(idx, "a", "a", 8.0) == 0.0);
}

TEST_CASE("toy corpus ngd(a,b) with N=8 is exactly one") {
    auto idx = toy_corpus();
    // (log2 4 - log2 2) / (log2 8 - log2 4) = 1.
    CHECK(ngd(idx, "a", "b", 8.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("unknown terms and bad N are rejected") {
    auto idx = toy_corpus();
    CHECK_THROWS_AS(ngd(idx, "nope", "b", 8.0), UnknownTermError);
    CHECK_THROWS_AS(ngd(idx, "a", "b", 2.0), std::invalid_argument);
}

TEST_CASE("never co-occurring terms give the infinity sentinel") {
    auto idx = CorpusIndex::from_texts({"a", "a c", "b c", "b"});
    CHECK(std::isinf(ngd(idx, "a", "b", 4.0)));
}

TEST_CASE("google code form of NGD matches the count form") {
    auto idx = toy_corpus();
    double n = idx.normalizer();
    double ga = google_code(idx, "a", n);
    double gb = google_code(idx, "b", n);
    double gab = google_code(idx, "a", "b", n);
    double via_code = (gab - std::min(ga, gb)) / std::max(ga, gb);
    CHECK(via_code == Catch::Approx(ngd(idx, "a", "b", n)).margin(1e-9));
}

TEST_CASE("google code of the toy pair is log2 5 bits") {
    // g(a,b) = 2/10 over the {a,b}-only normalizer.
    ManualCounts mc({{"a", 4}, {"b", 4}}, {{{"a", "b"}, 2}}, 10.0);
    CHECK(google_code(mc, "a", "b", 10.0) == Catch::Approx(std::log2(5.0)).margin(1e-12));
}

TEST_CASE("ngd is base invariant") {
    auto idx = toy_corpus();
    double fx = idx.count("a"), fy = idx.count("b"), fxy = idx.pair_count("a", "b");
    double nlog = (std::max(std::log(fx), std::log(fy)) - std::log(fxy)) /
                  (std::log(12.0) - std::min(std::log(fx), std::log(fy)));
    CHECK(ngd(idx, "a", "b", 12.0) == Catch::Approx(nlog).margin(1e-12));
}

TEST_CASE("ngd decreases strictly in N") {
    auto& p = horse_rider(false);
    double prev = ngd(p, "horse", "rider", 1e8);
    for (double n : {1e9, 1e10, 1e11}) {
        double v = ngd(p, "horse", "rider", n);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("pair count above singleton count is flagged, value clamped at zero") {
    ManualCounts weird({{"x", 10}, {"y", 10}}, {{{"x", "y"}, 50}}, 1000.0);
    NgdFlags flags;
    double v = ngd(weird, "x", "y", 1000.0, &flags);
    CHECK(flags.count_anomaly);
    CHECK(flags.clamped_negative);
    CHECK(v == 0.0);
}

TEST_CASE("ngd matrix of the toy corpus") {
    auto idx = toy_corpus();
    auto res = ngd_matrix(idx, {"a", "b"}, 8.0);
    CHECK(res.matrix.at(0, 0) == 0.0);
    CHECK(res.matrix.at(0, 1) == Catch::Approx(1.0).margin(1e-12));
    CHECK(res.matrix.at(1, 0) == res.matrix.at(0, 1));
    CHECK_FALSE(res.ceiling_applied);
}

TEST_CASE("ngd matrix rejects duplicates and lists unknown terms") {
    auto idx = toy_corpus();
    CHECK_THROWS_AS(ngd_matrix(idx, {"a", "a"}, 8.0), std::invalid_argument);
    try {
        ngd_matrix(idx, {"a", "zz", "qq"}, 8.0);
        FAIL("expected UnknownTermError");
    } catch (const UnknownTermError& e) {
        std::string msg = e.what();
        CHECK(msg.find("zz") != std::string::npos);
        CHECK(msg.find("qq") != std::string::npos);
    }
}

TEST_CASE("ngd matrix replaces infinities with the ceiling and flags it") {
    auto idx = CorpusIndex::from_texts({"a c", "b c", "a", "b"});
    auto res = ngd_matrix(idx, {"a", "b", "c"}, 4.0);
    CHECK(res.ceiling_applied);
    CHECK(res.matrix.at(0, 1) == 2.0);  // a and b never co-occur
    CHECK(res.matrix.at(0, 2) < 2.0);
}

TEST_CASE("offline provider is deterministic") {
    auto a = toy_corpus();
    auto b = toy_corpus();
    CHECK(a.normalizer() == b.normalizer());
    auto ra = ngd_matrix(a, {"a", "b"}, a.universe());
    auto rb = ngd_matrix(b, {"a", "b"}, b.universe());
    CHECK(ra.matrix.values == rb.matrix.values);
}

TEST_CASE("offline ngd is nonnegative with ngd(x,x)=0") {
    auto idx = toy_corpus();
    for (const auto& x : idx.vocabulary())
        for (const auto& y : idx.vocabulary()) {
            double v = ngd(idx, x, y, idx.universe());
            if (x == y)
                CHECK(v == 0.0);
            else
                CHECK(v >= 0.0);
        }
}

TEST_CASE("tokenizer lowercases and splits on non-alphanumerics") {
    auto toks = tokenize("The Horse, the RIDER; 42 horses!");
    std::vector<std::string> want = {"the", "horse", "the", "rider", "42", "horses"};
    CHECK(toks == want);
}
