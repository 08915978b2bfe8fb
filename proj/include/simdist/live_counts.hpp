#pragma once

// Live search-engine count provider: issues quoted singleton queries and
// conjunctive pair queries against a configured endpoint, parses the
// reported result count, and writes through a persistent TSV cache.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include <httplib.h>

#include "simdist/ngd.hpp"

namespace simdist {

struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Persistent map from canonical (x, y) term pairs to counts. One record
// per line: x<TAB>y<TAB>count<TAB>provider-id<TAB>unix-timestamp, with
// x = y for singletons and x <= y lexicographically. Append-only.
class CountCache {
public:
    explicit CountCache(std::string path) : path_(std::move(path)) { load(); }

    static std::pair<std::string, std::string> canonical(const std::string& x,
                                                         const std::string& y) {
        return x <= y ? std::make_pair(x, y) : std::make_pair(y, x);
    }

    std::optional<double> lookup(const std::string& x, const std::string& y) const {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = entries_.find(canonical(x, y));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void store(const std::string& x, const std::string& y, double count,
               const std::string& provider_id) {
        auto key = canonical(x, y);
        std::lock_guard<std::mutex> lk(mu_);
        entries_[key] = count;
        std::ofstream out(path_, std::ios::app);
        if (!out) throw ProviderError("count cache: cannot append to " + path_);
        out << key.first << '\t' << key.second << '\t' << format_count(count) << '\t'
            << provider_id << '\t' << std::time(nullptr) << '\n';
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lk(mu_);
        return entries_.size();
    }

private:
    static std::string format_count(double c) {
        std::ostringstream os;
        os.precision(17);
        if (c == static_cast<double>(static_cast<std::int64_t>(c)))
            os << static_cast<std::int64_t>(c);
        else
            os << c;
        return os.str();
    }

    void load() {
        std::ifstream in(path_);
        if (!in) return;  // fresh cache
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string x, y, cnt, pid, ts;
            if (!std::getline(ls, x, '\t') || !std::getline(ls, y, '\t') ||
                !std::getline(ls, cnt, '\t'))
                throw ProviderError("count cache: malformed line: " + line);
            std::getline(ls, pid, '\t');
            std::getline(ls, ts, '\t');
            entries_[{x, y}] = std::stod(cnt);  // later records win
        }
    }

    std::string path_;
    mutable std::mutex mu_;
    std::map<std::pair<std::string, std::string>, double> entries_;
};

struct LiveConfig {
    std::string host;              // e.g. "http://localhost:8080"
    std::string url_template;      // path with {query} placeholder
    std::string count_regex = R"((\d[\d,]*))";  // first capture = count
    std::string provider_id = "live";
    std::string api_key;           // substituted for {key} in the template
    double universe = 0.0;         // configured M estimate (default N)
    int rate_limit_ms = 250;
    int max_retries = 3;
    int backoff_ms = 500;
};

namespace detail {

inline std::string url_encode(const std::string& s) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 15]);
        }
    }
    return out;
}

inline std::string substitute(std::string tmpl, const std::string& key,
                              const std::string& value) {
    for (std::size_t pos; (pos = tmpl.find(key)) != std::string::npos;)
        tmpl.replace(pos, key.size(), value);
    return tmpl;
}

}  // namespace detail

// Count provider backed by a live endpoint, with write-through caching and
// serialized, rate-limited outbound requests.
class LiveCountProvider final : public CountProvider {
public:
    LiveCountProvider(LiveConfig cfg, std::shared_ptr<CountCache> cache)
        : cfg_(std::move(cfg)), cache_(std::move(cache)) {
        if (cfg_.host.empty()) throw std::invalid_argument("live provider: no host");
    }

    double count(const std::string& term) const override {
        return cached_query(term, term, "\"" + term + "\"");
    }

    double pair_count(const std::string& x, const std::string& y) const override {
        if (x == y) return count(x);
        // Conjunctive query in canonical order, matching the
        // event-intersection model.
        auto [a, b] = CountCache::canonical(x, y);
        return cached_query(a, b, "\"" + a + "\" \"" + b + "\"");
    }

    double universe() const override { return cfg_.universe; }
    std::string id() const override { return cfg_.provider_id; }

    std::size_t network_calls() const { return calls_; }

    // Pair counts above a singleton count are engine estimates; they are
    // used as-is, with a warning recorded here.
    bool anomaly_warned() const { return anomaly_warned_; }
    void note_anomaly() const { anomaly_warned_ = true; }

private:
    double cached_query(const std::string& x, const std::string& y,
                        const std::string& query) const {
        if (auto hit = cache_->lookup(x, y)) return *hit;
        double c = fetch(query);
        cache_->store(x, y, c, cfg_.provider_id);
        if (x != y) {
            auto fx = cache_->lookup(x, x);
            auto fy = cache_->lookup(y, y);
            if ((fx && c > *fx) || (fy && c > *fy)) note_anomaly();
        }
        return c;
    }

    double fetch(const std::string& query) const {
        std::lock_guard<std::mutex> lk(net_mu_);
        std::string path = detail::substitute(cfg_.url_template, "{query}",
                                              detail::url_encode(query));
        path = detail::substitute(path, "{key}", cfg_.api_key);

        httplib::Client cli(cfg_.host);
        cli.set_connection_timeout(10);
        cli.set_read_timeout(30);

        int backoff = cfg_.backoff_ms;
        for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
            throttle();
            auto res = cli.Get(path);
            ++calls_;
            if (!res) {
                if (attempt == cfg_.max_retries)
                    throw ProviderError("live provider: network failure for " + path);
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
                backoff *= 2;
                continue;
            }
            if (res->status == 429 || res->status == 503) {
                if (attempt == cfg_.max_retries)
                    throw ProviderError("live provider: rate limited");
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
                backoff *= 2;
                continue;
            }
            if (res->status != 200)
                throw ProviderError("live provider: HTTP " + std::to_string(res->status));
            return parse_count(res->body);
        }
        throw ProviderError("live provider: retries exhausted");
    }

    double parse_count(const std::string& body) const {
        std::regex re(cfg_.count_regex);
        std::smatch m;
        if (!std::regex_search(body, m, re) || m.size() < 2)
            throw ProviderError("live provider: count not found in response");
        std::string digits;
        for (char c : m[1].str())
            if (c != ',') digits.push_back(c);
        return std::stod(digits);
    }

    void throttle() const {
        auto now = std::chrono::steady_clock::now();
        auto min_gap = std::chrono::milliseconds(cfg_.rate_limit_ms);
        if (last_request_ != std::chrono::steady_clock::time_point{} &&
            now - last_request_ < min_gap)
            std::this_thread::sleep_for(min_gap - (now - last_request_));
        last_request_ = std::chrono::steady_clock::now();
    }

    LiveConfig cfg_;
    std::shared_ptr<CountCache> cache_;
    mutable std::mutex net_mu_;
    mutable std::chrono::steady_clock::time_point last_request_{};
    mutable std::size_t calls_ = 0;
    mutable bool anomaly_warned_ = false;
};

}  // namespace simdist
