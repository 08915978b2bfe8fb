// simdist: similarity distances (NCD over bytes, NGD over terms), quartet
// tree clustering, and anchor-based term classification.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "simdist/compress.hpp"
#include "simdist/io_formats.hpp"
#include "simdist/learn.hpp"
#include "simdist/live_counts.hpp"
#include "simdist/ncd.hpp"
#include "simdist/ngd.hpp"
#include "simdist/quartet.hpp"
#include "simdist/svm.hpp"
#include "simdist/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;

simdist::Bytes read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw simdist::ParseError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto s = ss.str();
    return simdist::Bytes(s.begin(), s.end());
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw simdist::ParseError("cannot read config: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw simdist::ParseError("config: expected key=value: " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

simdist::LiveConfig live_config_from_file(const std::string& path) {
    auto kv = read_config(path);
    simdist::LiveConfig cfg;
    cfg.host = kv.count("host") ? kv["host"] : "";
    cfg.url_template = kv.count("url_template") ? kv["url_template"] : "";
    if (kv.count("count_regex")) cfg.count_regex = kv["count_regex"];
    if (kv.count("provider_id")) cfg.provider_id = kv["provider_id"];
    if (kv.count("universe")) cfg.universe = std::stod(kv["universe"]);
    if (kv.count("rate_limit_ms")) cfg.rate_limit_ms = std::stoi(kv["rate_limit_ms"]);
    if (kv.count("max_retries")) cfg.max_retries = std::stoi(kv["max_retries"]);
    if (const char* key = std::getenv("SIMDIST_API_KEY")) cfg.api_key = key;
    return cfg;
}

std::string cache_path_or_default() {
    if (const char* p = std::getenv("SIMDIST_CACHE")) return p;
    return "simdist-cache.tsv";
}

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- subcommand bodies ------------------------------------------------------

int cmd_ncd(const std::vector<std::string>& paths, const std::string& backend, int level,
            const std::string& matrix_out) {
    auto comp = simdist::make_compressor(backend, level);
    std::vector<simdist::DataObject> objects;
    for (const auto& p : paths) {
        objects.push_back({p, read_file_bytes(p)});
        if (comp->oversized(2 * objects.back().bytes.size()))
            std::cerr << "warning: " << p << " exceeds half the backend window size\n";
    }
    if (objects.size() == 2) {
        auto r = simdist::ncd(*comp, objects[0].bytes, objects[1].bytes);
        std::printf("%.6f\n", r.value);
        if (r.out_of_range) std::cerr << "warning: NCD outside [0, 1.2]\n";
        return kExitOk;
    }
    auto m = simdist::distance_matrix(*comp, objects);
    if (matrix_out.empty())
        simdist::write_matrix(std::cout, m);
    else
        simdist::write_matrix(matrix_out, m);
    return kExitOk;
}

int cmd_maketree(const std::string& matrix_path, unsigned runs, std::uint64_t seed,
                 std::size_t budget, const std::string& newick_out,
                 const std::string& dot_out, const std::string& trace_out) {
    auto m = simdist::read_matrix(matrix_path);
    if (m.size() < 4) throw InputError("maketree: need a matrix with n >= 4");
    simdist::SearchConfig cfg;
    cfg.seed = seed;
    cfg.runs = runs;
    cfg.max_steps = budget;
    auto res = simdist::search(m, cfg);
    if (!newick_out.empty()) {
        std::ofstream os(newick_out);
        os << simdist::write_newick(res.tree, res.st);
    }
    if (!dot_out.empty()) {
        std::ofstream os(dot_out);
        os << simdist::write_dot(res.tree, res.st);
    }
    if (!trace_out.empty()) {
        std::ofstream os(trace_out);
        simdist::write_trace(os, res.trace);
    }
    std::printf("S(T)=%.3f\n", res.st);
    return kExitOk;
}

int cmd_ngd(const std::string& x, const std::string& y, const std::string& corpus,
            const std::string& live_cfg, const std::vector<std::string>& counts,
            double n_override) {
    std::unique_ptr<simdist::CountProvider> owned;
    std::shared_ptr<simdist::CountCache> cache;
    double n = n_override;

    if (!counts.empty()) {
        // Manual mode: term=count pairs plus pair=count.
        std::map<std::string, double> singles;
        double pair = -1.0;
        for (const auto& kv : counts) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw InputError("--counts: expected term=count");
            std::string k = kv.substr(0, eq);
            double v = std::stod(kv.substr(eq + 1));
            if (k == "pair")
                pair = v;
            else
                singles[k] = v;
        }
        if (pair < 0 || !singles.count(x) || !singles.count(y))
            throw InputError("--counts needs counts for both terms and pair=");
        if (n <= 0) throw InputError("--counts mode requires --N");
        owned = std::make_unique<simdist::ManualCounts>(
            singles,
            std::map<std::pair<std::string, std::string>, double>{
                {simdist::CountCache::canonical(x, y), pair}},
            n);
    } else if (!corpus.empty()) {
        auto idx = std::make_unique<simdist::CorpusIndex>(
            simdist::CorpusIndex::from_texts(simdist::load_corpus(corpus)));
        if (n <= 0) n = idx->universe();
        owned = std::move(idx);
    } else if (!live_cfg.empty()) {
        auto cfg = live_config_from_file(live_cfg);
        cache = std::make_shared<simdist::CountCache>(cache_path_or_default());
        owned = std::make_unique<simdist::LiveCountProvider>(cfg, cache);
        if (n <= 0) n = cfg.universe;
    } else {
        throw InputError("ngd: one of --counts, --corpus, --live is required");
    }

    simdist::NgdFlags flags;
    double v = simdist::ngd(*owned, x, y, n, &flags);
    if (flags.count_anomaly)
        std::cerr << "warning: pair count exceeds a singleton count (engine estimate)\n";
    if (std::isinf(v))
        std::printf("inf\n");
    else
        std::printf("%.3f\n", v);
    return kExitOk;
}

int cmd_index(const std::string& corpus, const std::string& out) {
    auto idx = simdist::CorpusIndex::from_texts(simdist::load_corpus(corpus));
    if (!out.empty()) simdist::write_corpus_index(out, idx);
    std::printf("M=%.0f N=%.0f alpha=%.0f terms=%zu\n", idx.universe(), idx.normalizer(),
                idx.alpha(), idx.postings().size());
    return kExitOk;
}

int cmd_classify(const std::string& train_path, const std::string& test_path,
                 const std::string& anchors_path, const std::string& provider_path,
                 double n_override, const std::string& model_out, std::uint64_t seed) {
    auto idx = simdist::read_corpus_index(provider_path);
    double n = n_override > 0 ? n_override : idx.universe();

    simdist::AnchorSet anchors{simdist::read_term_list(anchors_path)};
    anchors.validate(idx);

    auto train_terms = simdist::read_labeled_terms(train_path);
    auto test_terms = simdist::read_labeled_terms(test_path);
    auto train_vecs = simdist::featurize_all(idx, anchors, train_terms, n);
    auto test_vecs = simdist::featurize_all(idx, anchors, test_terms, n);

    simdist::TrainConfig tc;
    tc.fold_seed = seed;
    auto model = simdist::train(train_vecs, tc);
    double acc = simdist::evaluate(model, test_vecs);
    if (!model_out.empty()) simdist::write_model(model_out, model);
    std::printf("accuracy=%.4f\n", acc);
    return kExitOk;
}

int cmd_check_compressor(const std::string& backend, int level,
                         const std::string& samples_dir) {
    auto comp = simdist::make_compressor(backend, level);
    std::vector<simdist::Bytes> samples;
    if (samples_dir.empty()) {
        samples = simdist::synth::normality_suite();
    } else {
        for (const auto& doc : simdist::load_corpus(samples_dir))
            samples.push_back(simdist::to_bytes(doc));
    }
    auto rep = simdist::check_normality(*comp, samples);
    if (rep.oversized_input_warning)
        std::cerr << "warning: sample exceeds half the backend window size;"
                     " compression beyond the window is not meaningful\n";
    auto line = [](const char* name, const simdist::AxiomResult& ax) {
        std::printf("%-15s %s  worst violation %.1f bits (samples %zu,%zu,%zu)\n", name,
                    ax.pass ? "PASS" : "FAIL", ax.violation_bits, ax.witness_a,
                    ax.witness_b, ax.witness_c);
    };
    line("idempotency", rep.idempotency);
    line("monotonicity", rep.monotonicity);
    line("symmetry", rep.symmetry);
    line("distributivity", rep.distributivity);
    line("subadditivity", rep.subadditivity);
    return rep.all_pass() ? kExitOk : kExitCompute;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simdist: compression/web distances, quartet trees, term classification"};
    app.require_subcommand(1);

    // ncd
    std::vector<std::string> ncd_paths;
    std::string backend = "bzip-like";
    int level = 9;
    std::string matrix_out;
    auto* sc_ncd = app.add_subcommand("ncd", "pairwise normalized compression distance");
    sc_ncd->add_option("paths", ncd_paths, "input files")->required()->expected(2, -1);
    sc_ncd->add_option("--backend", backend, "compressor backend");
    sc_ncd->add_option("--level", level, "compression level");
    sc_ncd->add_option("--matrix-out", matrix_out, "matrix output file (for >2 inputs)");

    // maketree
    std::string matrix_path, newick_out, dot_out, trace_out;
    unsigned runs = 4;
    std::uint64_t seed = 1;
    std::size_t budget = 20000;
    auto* sc_tree = app.add_subcommand("maketree", "fit a quartet tree to a matrix");
    sc_tree->add_option("--matrix", matrix_path, "distance matrix file")->required();
    sc_tree->add_option("--runs", runs, "parallel hill-climbers");
    sc_tree->add_option("--seed", seed, "rng seed");
    sc_tree->add_option("--budget", budget, "mutation steps per run");
    sc_tree->add_option("--newick-out", newick_out, "Newick output path");
    sc_tree->add_option("--dot-out", dot_out, "DOT output path");
    sc_tree->add_option("--trace-out", trace_out, "trace TSV output path");

    // ngd
    std::string term_x, term_y, corpus, live_cfg;
    std::vector<std::string> counts;
    double n_override = 0.0;
    auto* sc_ngd = app.add_subcommand("ngd", "normalized Google distance between terms");
    sc_ngd->add_option("x", term_x)->required();
    sc_ngd->add_option("y", term_y)->required();
    sc_ngd->add_option("--corpus", corpus, "offline corpus path");
    sc_ngd->add_option("--live", live_cfg, "live endpoint config file");
    sc_ngd->add_option("--counts", counts, "manual counts: x=f y=f pair=f");
    sc_ngd->add_option("--N", n_override, "normalizer N");

    // index
    std::string index_corpus, index_out;
    auto* sc_index = app.add_subcommand("index", "build an offline corpus provider");
    sc_index->add_option("corpus", index_corpus, "corpus path")->required();
    sc_index->add_option("--out", index_out, "provider file");

    // classify
    std::string train_path, test_path, anchors_path, provider_path, model_out;
    double classify_n = 0.0;
    std::uint64_t classify_seed = 7;
    auto* sc_cls = app.add_subcommand("classify", "anchor-vector SVM classification");
    sc_cls->add_option("--train", train_path, "training TSV (label<TAB>term)")->required();
    sc_cls->add_option("--test", test_path, "test TSV")->required();
    sc_cls->add_option("--anchors", anchors_path, "anchor term list")->required();
    sc_cls->add_option("--provider", provider_path, "corpus provider file")->required();
    sc_cls->add_option("--N", classify_n, "normalizer N");
    sc_cls->add_option("--model-out", model_out, "model output path");
    sc_cls->add_option("--seed", classify_seed, "cv fold seed");

    // check-compressor
    std::string cc_backend = "bzip-like", cc_samples;
    int cc_level = 9;
    auto* sc_cc = app.add_subcommand("check-compressor", "normal-compressor axiom harness");
    sc_cc->add_option("--backend", cc_backend, "compressor backend");
    sc_cc->add_option("--level", cc_level, "compression level");
    sc_cc->add_option("--samples", cc_samples, "sample corpus (default: built-in suite)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sc_ncd) return cmd_ncd(ncd_paths, backend, level, matrix_out);
        if (*sc_tree)
            return cmd_maketree(matrix_path, runs, seed, budget, newick_out, dot_out,
                                trace_out);
        if (*sc_ngd) return cmd_ngd(term_x, term_y, corpus, live_cfg, counts, n_override);
        if (*sc_index) return cmd_index(index_corpus, index_out);
        if (*sc_cls)
            return cmd_classify(train_path, test_path, anchors_path, provider_path,
                                classify_n, model_out, classify_seed);
        if (*sc_cc) return cmd_check_compressor(cc_backend, cc_level, cc_samples);
    } catch (const simdist::BackendError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const simdist::ProviderError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
