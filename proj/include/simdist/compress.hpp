#pragma once

// Lossless-compressor backends exposing a code-word-length function C(x),
// the conditional compressed information C(y|x) = C(xy) - C(x), and a
// harness that empirically checks the normal-compressor axioms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

namespace simdist {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Compressor {
public:
    virtual ~Compressor() = default;

    // Exact bit length of the compressed, prefix-decodable encoding of x.
    virtual std::int64_t code_length(const Bytes& x) const = 0;

    virtual std::string name() const = 0;

    // Window size in bytes, if the backend has one.
    virtual std::optional<std::size_t> window_limit() const { return std::nullopt; }

    // True when inputs of this size exceed the window-size guidance
    // (compression beyond the window is not meaningful).
    bool oversized(std::size_t n) const {
        auto w = window_limit();
        return w && n > *w / 2;
    }
};

// --- identity -------------------------------------------------------------
//
// Degenerate reference backend: stores x verbatim behind a fixed-size
// length frame. Analytically known code lengths for exact tests.

class IdentityCompressor final : public Compressor {
public:
    static constexpr std::int64_t kHeaderBits = 32;  // length frame

    std::int64_t code_length(const Bytes& x) const override {
        return kHeaderBits + 8 * static_cast<std::int64_t>(x.size());
    }
    std::string name() const override { return "identity"; }

    static Bytes encode(const Bytes& x) {
        Bytes out(4);
        std::uint32_t n = static_cast<std::uint32_t>(x.size());
        for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(n >> (8 * i));
        out.insert(out.end(), x.begin(), x.end());
        return out;
    }
    static Bytes decode(const Bytes& code) {
        if (code.size() < 4) throw BackendError("identity: truncated frame");
        std::uint32_t n = 0;
        for (int i = 0; i < 4; ++i) n |= static_cast<std::uint32_t>(code[i]) << (8 * i);
        if (code.size() != 4 + n) throw BackendError("identity: length mismatch");
        return Bytes(code.begin() + 4, code.end());
    }
};

// --- deflate (LZ77 family) -------------------------------------------------

class DeflateCompressor final : public Compressor {
public:
    explicit DeflateCompressor(int level = 9) : level_(level) {
        if (level < 1 || level > 9) throw BackendError("deflate: level must be in 1..9");
    }

    std::int64_t code_length(const Bytes& x) const override {
        return 8 * static_cast<std::int64_t>(encode(x).size());
    }
    std::string name() const override { return "deflate"; }
    std::optional<std::size_t> window_limit() const override { return 32 * 1024; }

    Bytes encode(const Bytes& x) const {
        z_stream zs{};
        if (deflateInit(&zs, level_) != Z_OK) throw BackendError("deflate: init failed");
        Bytes out(deflateBound(&zs, static_cast<uLong>(x.size())));
        zs.next_in = const_cast<Bytef*>(x.data());
        zs.avail_in = static_cast<uInt>(x.size());
        zs.next_out = out.data();
        zs.avail_out = static_cast<uInt>(out.size());
        int rc = deflate(&zs, Z_FINISH);
        deflateEnd(&zs);
        if (rc != Z_STREAM_END) throw BackendError("deflate: stream error");
        out.resize(out.size() - zs.avail_out);
        return out;
    }

    static Bytes decode(const Bytes& code, std::size_t plain_size_hint = 0) {
        z_stream zs{};
        if (inflateInit(&zs) != Z_OK) throw BackendError("inflate: init failed");
        Bytes out;
        out.resize(std::max<std::size_t>(plain_size_hint, 4096));
        zs.next_in = const_cast<Bytef*>(code.data());
        zs.avail_in = static_cast<uInt>(code.size());
        std::size_t written = 0;
        for (;;) {
            zs.next_out = out.data() + written;
            zs.avail_out = static_cast<uInt>(out.size() - written);
            int rc = inflate(&zs, Z_NO_FLUSH);
            written = out.size() - zs.avail_out;
            if (rc == Z_STREAM_END) break;
            if (rc != Z_OK && rc != Z_BUF_ERROR) {
                inflateEnd(&zs);
                throw BackendError("inflate: stream error");
            }
            if (zs.avail_out == 0) out.resize(out.size() * 2);
        }
        inflateEnd(&zs);
        out.resize(written);
        return out;
    }

private:
    int level_;
};

// --- block-sorting (BWT family) ---------------------------------------------
//
// Whole-block Burrows-Wheeler transform, run splitting, move-to-front on run
// heads, and adaptive arithmetic models for ranks and run lengths. The code
// length is the Shannon length of the adaptive code plus a fixed header;
// no decoder is shipped (the identity/deflate backends carry the round-trip
// checks).

namespace detail {

// Suffix array over x + sentinel via prefix doubling. O(n log^2 n).
inline std::vector<std::int32_t> suffix_array(const Bytes& x) {
    const std::int32_t n = static_cast<std::int32_t>(x.size()) + 1;  // sentinel at n-1
    std::vector<std::int32_t> sa(n), rank(n), tmp(n);
    for (std::int32_t i = 0; i < n; ++i) {
        sa[i] = i;
        rank[i] = (i + 1 < n) ? static_cast<std::int32_t>(x[i]) + 1 : 0;
    }
    for (std::int32_t k = 1;; k *= 2) {
        auto cmp = [&](std::int32_t a, std::int32_t b) {
            if (rank[a] != rank[b]) return rank[a] < rank[b];
            std::int32_t ra = a + k < n ? rank[a + k] : -1;
            std::int32_t rb = b + k < n ? rank[b + k] : -1;
            return ra < rb;
        };
        std::sort(sa.begin(), sa.end(), cmp);
        tmp[sa[0]] = 0;
        for (std::int32_t i = 1; i < n; ++i)
            tmp[sa[i]] = tmp[sa[i - 1]] + (cmp(sa[i - 1], sa[i]) ? 1 : 0);
        rank = tmp;
        if (rank[sa[n - 1]] == n - 1) break;
    }
    return sa;
}

// BWT last column; sentinel emitted as symbol 256.
inline std::vector<std::uint16_t> bwt(const Bytes& x) {
    auto sa = suffix_array(x);
    std::vector<std::uint16_t> out(sa.size());
    const std::int32_t n = static_cast<std::int32_t>(x.size()) + 1;
    for (std::int32_t i = 0; i < n; ++i) {
        std::int32_t j = sa[i];
        out[i] = (j == 0) ? 256 : static_cast<std::uint16_t>(x[j - 1]);
    }
    return out;
}

// Adaptive frequency model over a fixed alphabet; Shannon cost accounting.
class AdaptiveModel {
public:
    explicit AdaptiveModel(std::size_t alphabet, std::uint32_t increment = 24,
                           std::uint32_t limit = 1u << 16)
        : freq_(alphabet, 1), total_(static_cast<std::uint32_t>(alphabet)),
          inc_(increment), limit_(limit) {}

    // Cost of coding `sym`, in bits, then update.
    double encode(std::size_t sym) {
        double bits = std::log2(static_cast<double>(total_) / freq_[sym]);
        freq_[sym] += inc_;
        total_ += inc_;
        if (total_ >= limit_) rescale();
        return bits;
    }

private:
    void rescale() {
        total_ = 0;
        for (auto& f : freq_) {
            f = (f + 1) / 2;
            total_ += f;
        }
    }
    std::vector<std::uint32_t> freq_;
    std::uint32_t total_;
    std::uint32_t inc_, limit_;
};

// Adaptive binary model for escape-coded run-length bits.
class AdaptiveBit {
public:
    double encode(int bit) {
        double bits = std::log2(static_cast<double>(c_[0] + c_[1]) / c_[bit]);
        c_[bit] += 16;
        if (c_[0] + c_[1] >= (1u << 14)) {
            c_[0] = (c_[0] + 1) / 2;
            c_[1] = (c_[1] + 1) / 2;
        }
        return bits;
    }

private:
    std::uint32_t c_[2] = {1, 1};
};

}  // namespace detail

class BlockSortingCompressor final : public Compressor {
public:
    explicit BlockSortingCompressor(int level = 9) { (void)level; }

    std::int64_t code_length(const Bytes& x) const override {
        constexpr std::int64_t kHeaderBits = 64;  // length + primary index
        if (x.empty()) return kHeaderBits;

        auto last = detail::bwt(x);

        // MTF table over the 257-symbol alphabet (256 = sentinel).
        std::vector<std::uint16_t> mtf(257);
        std::iota(mtf.begin(), mtf.end(), 0);

        detail::AdaptiveModel ranks(257);
        detail::AdaptiveModel lengths(17);  // run lengths 1..16, 0 = escape
        detail::AdaptiveBit gamma_cont, gamma_bit;

        double bits = 0.0;
        std::size_t i = 0;
        while (i < last.size()) {
            std::uint16_t c = last[i];
            std::size_t run = 1;
            while (i + run < last.size() && last[i + run] == c) ++run;
            i += run;

            std::size_t r = 0;
            while (mtf[r] != c) ++r;
            bits += ranks.encode(r);
            for (std::size_t k = r; k > 0; --k) mtf[k] = mtf[k - 1];
            mtf[0] = c;

            if (run <= 16) {
                bits += lengths.encode(run);
            } else {
                bits += lengths.encode(0);
                // Elias-gamma the excess with adaptive bit models.
                std::uint64_t v = run - 16;
                int top = 63;
                while (!(v >> top)) --top;
                for (int b = 0; b < top; ++b) bits += gamma_cont.encode(1);
                bits += gamma_cont.encode(0);
                for (int b = top - 1; b >= 0; --b)
                    bits += gamma_bit.encode(static_cast<int>((v >> b) & 1));
            }
        }
        return kHeaderBits + static_cast<std::int64_t>(std::ceil(bits));
    }

    std::string name() const override { return "bzip-like"; }
};

// --- factory ---------------------------------------------------------------

inline std::shared_ptr<const Compressor> make_compressor(const std::string& name,
                                                         int level = 9) {
    if (name == "identity") return std::make_shared<IdentityCompressor>();
    if (name == "deflate") return std::make_shared<DeflateCompressor>(level);
    if (name == "bzip-like" || name == "block-sorting")
        return std::make_shared<BlockSortingCompressor>(level);
    throw BackendError("unknown compressor backend: " + name);
}

// --- C(y|x) ------------------------------------------------------------------

inline Bytes concat(const Bytes& x, const Bytes& y) {
    Bytes xy(x);
    xy.insert(xy.end(), y.begin(), y.end());
    return xy;
}

// Conditional compressed information, C(y|x) = C(xy) - C(x).
// Signed: pathological backends may return negative values.
inline std::int64_t conditional_info(const Compressor& c, const Bytes& x, const Bytes& y) {
    return c.code_length(concat(x, y)) - c.code_length(x);
}

// --- normality harness -------------------------------------------------------

// Default fudge term: the O(log n) of the axioms replaced by a small
// fraction of n, as windowed real-world backends require.
inline double default_tolerance(std::size_t n_bytes) {
    return 1024.0 + 0.05 * 8.0 * static_cast<double>(n_bytes);
}

struct AxiomResult {
    double violation_bits = 0.0;  // max over tested tuples, clamped at 0
    std::size_t witness_a = 0, witness_b = 0, witness_c = 0;  // sample indices
    bool pass = true;
};

struct NormalityReport {
    AxiomResult idempotency;
    AxiomResult monotonicity;
    AxiomResult symmetry;
    AxiomResult distributivity;
    AxiomResult subadditivity;
    bool oversized_input_warning = false;

    bool all_pass() const {
        return idempotency.pass && monotonicity.pass && symmetry.pass &&
               distributivity.pass && subadditivity.pass;
    }
};

template <typename Tolerance = double (*)(std::size_t)>
NormalityReport check_normality(const Compressor& c, const std::vector<Bytes>& samples,
                                Tolerance tau = default_tolerance) {
    if (samples.empty()) throw std::invalid_argument("check_normality: empty sample set");

    NormalityReport rep;
    for (const auto& s : samples)
        if (c.oversized(2 * s.size())) rep.oversized_input_warning = true;

    const std::size_t n = samples.size();
    std::vector<std::int64_t> single(n);
    for (std::size_t i = 0; i < n; ++i) single[i] = c.code_length(samples[i]);

    std::vector<std::vector<std::int64_t>> pair(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            pair[i][j] = c.code_length(concat(samples[i], samples[j]));

    auto note = [](AxiomResult& ax, double v, std::size_t a, std::size_t b,
                   std::size_t cc = 0) {
        if (v > ax.violation_bits) {
            ax.violation_bits = v;
            ax.witness_a = a;
            ax.witness_b = b;
            ax.witness_c = cc;
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        const double t1 = tau(2 * samples[i].size());
        note(rep.idempotency, static_cast<double>(pair[i][i] - single[i]), i, i);
        rep.idempotency.pass =
            rep.idempotency.pass && static_cast<double>(pair[i][i] - single[i]) <= t1;
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t nij = samples[i].size() + samples[j].size();
            const double t = tau(nij);
            double mono = static_cast<double>(single[i] - pair[i][j]);
            note(rep.monotonicity, mono, i, j);
            rep.monotonicity.pass = rep.monotonicity.pass && mono <= t;

            double sub = static_cast<double>(pair[i][j] - single[i] - single[j]);
            note(rep.subadditivity, sub, i, j);
            rep.subadditivity.pass = rep.subadditivity.pass && sub <= t;

            if (j > i) {
                double sym = std::abs(static_cast<double>(pair[i][j] - pair[j][i]));
                note(rep.symmetry, sym, i, j);
                rep.symmetry.pass = rep.symmetry.pass && sym <= t;
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t nmax =
                    samples[i].size() + samples[j].size() + samples[k].size();
                double d = static_cast<double>(pair[i][j] + single[k] - pair[i][k] -
                                               pair[j][k]);
                note(rep.distributivity, d, i, j, k);
                rep.distributivity.pass = rep.distributivity.pass && d <= tau(nmax);
            }

    auto clamp0 = [](AxiomResult& ax) { ax.violation_bits = std::max(0.0, ax.violation_bits); };
    clamp0(rep.idempotency);
    clamp0(rep.monotonicity);
    clamp0(rep.symmetry);
    clamp0(rep.distributivity);
    clamp0(rep.subadditivity);
    return rep;
}

}  // namespace simdist
