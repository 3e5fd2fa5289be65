#pragma once

// Word-level n-gram language model with interpolated modified Kneser-Ney
// smoothing, ARPA serialization, and perplexity scoring.
//
// Count tables are mergeable across shards (merge before estimate). A
// trained model is immutable and safe to share across scoring threads.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpusprep/unicode.hpp"

namespace corpusprep::ngram {

using TokenId = uint32_t;

inline constexpr TokenId kUnkId = 0;
inline constexpr TokenId kBosId = 1;
inline constexpr TokenId kEosId = 2;
inline constexpr const char* kUnk = "<unk>";
inline constexpr const char* kBos = "<s>";
inline constexpr const char* kEos = "</s>";

// Placeholder log10 value for events the model never predicts (<s>) and
// for zero backoff weights; matches the usual ARPA convention.
inline constexpr double kLogZero = -99.0;

// Grams are packed as big-endian token ids so that byte-wise key order
// equals id-sequence order.
using Key = std::string;

inline Key pack_key(std::span<const TokenId> ids) {
    Key k;
    k.reserve(ids.size() * 4);
    for (TokenId id : ids) {
        k.push_back(static_cast<char>(id >> 24));
        k.push_back(static_cast<char>((id >> 16) & 0xFF));
        k.push_back(static_cast<char>((id >> 8) & 0xFF));
        k.push_back(static_cast<char>(id & 0xFF));
    }
    return k;
}

inline std::vector<TokenId> unpack_key(const Key& k) {
    std::vector<TokenId> ids(k.size() / 4);
    for (size_t i = 0; i < ids.size(); ++i) {
        ids[i] = (static_cast<TokenId>(static_cast<uint8_t>(k[4 * i])) << 24) |
                 (static_cast<TokenId>(static_cast<uint8_t>(k[4 * i + 1])) << 16) |
                 (static_cast<TokenId>(static_cast<uint8_t>(k[4 * i + 2])) << 8) |
                 static_cast<TokenId>(static_cast<uint8_t>(k[4 * i + 3]));
    }
    return ids;
}

// Canonical tokenization for perplexity scoring: lowercase, split on
// Unicode whitespace, strip leading/trailing punctuation, digits -> "0".
inline std::vector<std::string> tokenize_for_lm(std::string_view line) {
    std::vector<std::string> out;
    for (const std::string& raw : unicode::split_whitespace(unicode::to_lower(line))) {
        std::u32string w = unicode::to_utf32(raw);
        size_t b = 0, e = w.size();
        while (b < e && unicode::is_punctuation(w[b])) ++b;
        while (e > b && unicode::is_punctuation(w[e - 1])) --e;
        if (b == e) continue;
        std::string tok;
        for (size_t i = b; i < e; ++i)
            unicode::append_utf8(tok, unicode::is_digit(w[i]) ? U'0' : w[i]);
        out.push_back(std::move(tok));
    }
    return out;
}

struct Discounts {
    double d1 = 0, d2 = 0, d3 = 0;
    bool fallback = false;
    double of(int64_t c) const {
        if (c <= 0) return 0;
        if (c == 1) return d1;
        if (c == 2) return d2;
        return d3;
    }
};

// Estimates the three per-order discounts from count-of-counts; falls back
// to absolute discounting (0.75) on degenerate statistics.
inline Discounts estimate_discounts(int64_t n1, int64_t n2, int64_t n3, int64_t n4) {
    Discounts d;
    if (n1 == 0 || n2 == 0) {
        d.d1 = d.d2 = d.d3 = 0.75;
        d.fallback = true;
        return d;
    }
    double y = static_cast<double>(n1) / (n1 + 2.0 * n2);
    d.d1 = 1.0 - 2.0 * y * n2 / n1;
    d.d2 = 2.0 - 3.0 * y * n3 / n2;
    d.d3 = n3 > 0 ? 3.0 - 4.0 * y * n4 / n3 : d.d2;
    if (d.d1 < 0 || d.d2 < 0 || d.d3 < 0 || d.d1 > 1 || d.d2 > 2 || d.d3 > 3) {
        d.d1 = d.d2 = d.d3 = 0.75;
        d.fallback = true;
    }
    return d;
}

// Raw n-gram counts keyed by token strings (unit separator joined), so
// shard tables merge by plain addition before any smoothing happens.
class NgramCounts {
public:
    explicit NgramCounts(int order) : order_(order), raw_(order) {
        if (order < 1) throw std::invalid_argument("ngram order must be >= 1");
    }

    int order() const { return order_; }

    void add_sentence(const std::vector<std::string>& tokens) {
        std::vector<std::string_view> padded;
        padded.reserve(tokens.size() + 2);
        padded.push_back(kBos);
        for (const std::string& t : tokens) {
            // Reserved markers in running text are treated as unknown words.
            padded.push_back(t == kBos || t == kEos || t == kUnk ? std::string_view(kUnk)
                                                                 : std::string_view(t));
        }
        padded.push_back(kEos);
        for (int k = 1; k <= order_; ++k) {
            for (size_t i = 0; i + k <= padded.size(); ++i) {
                std::string key(padded[i]);
                for (int j = 1; j < k; ++j) {
                    key.push_back('\x1F');
                    key.append(padded[i + j]);
                }
                raw_[k - 1][key]++;
            }
        }
        ++sentences_;
    }

    void merge(const NgramCounts& other) {
        if (other.order_ != order_) throw std::invalid_argument("ngram order mismatch in merge");
        for (int k = 0; k < order_; ++k)
            for (const auto& [g, c] : other.raw_[k]) raw_[k][g] += c;
        sentences_ += other.sentences_;
    }

    const std::unordered_map<std::string, int64_t>& table(int k) const { return raw_[k - 1]; }
    int64_t sentence_count() const { return sentences_; }

private:
    int order_;
    std::vector<std::unordered_map<std::string, int64_t>> raw_;
    int64_t sentences_ = 0;
};

struct PerplexityReport {
    int64_t token_count = 0;  // includes </s> events, excludes <s>
    double total_log10_prob = 0;
    double perplexity = 1;
    int64_t oov_count = 0;
};

class NGramModel {
public:
    struct Entry {
        double log10_prob = kLogZero;
        double log10_bow = 0;
        bool has_bow = false;
    };

    int order() const { return order_; }
    const std::vector<Discounts>& discounts() const { return discounts_; }
    const std::vector<std::string>& estimation_notes() const { return notes_; }
    size_t vocab_size() const { return id_to_token_.size(); }

    TokenId token_id(std::string_view tok) const {
        auto it = token_to_id_.find(std::string(tok));
        return it == token_to_id_.end() ? kUnkId : it->second;
    }
    const std::string& token(TokenId id) const { return id_to_token_.at(id); }

    // All predictable token ids: everything except <s>.
    std::vector<TokenId> predictable_ids() const {
        std::vector<TokenId> out;
        for (TokenId id = 0; id < id_to_token_.size(); ++id)
            if (id != kBosId) out.push_back(id);
        return out;
    }

    size_t gram_count(int k) const { return entries_[k - 1].size(); }

    const Entry* find(int k, const Key& key) const {
        const auto& idx = index_[k - 1];
        auto it = idx.find(key);
        return it == idx.end() ? nullptr : &entries_[k - 1][it->second].second;
    }

    // ARPA-style conditional: longest stored gram wins, missing grams back
    // off through stored context weights.
    double log10_prob_id(std::span<const TokenId> ctx, TokenId w) const {
        size_t use = std::min(ctx.size(), static_cast<size_t>(order_ - 1));
        std::span<const TokenId> c = ctx.subspan(ctx.size() - use);
        double backoff = 0;
        for (size_t len = use;; --len) {
            std::vector<TokenId> gram(c.end() - len, c.end());
            gram.push_back(w);
            if (const Entry* e = find(static_cast<int>(len) + 1, pack_key(gram)))
                return backoff + e->log10_prob;
            if (len == 0) break;
            std::vector<TokenId> ctx_gram(c.end() - len, c.end());
            if (const Entry* ce = find(static_cast<int>(len), pack_key(ctx_gram)); ce && ce->has_bow)
                backoff += ce->log10_bow;
        }
        // Unreachable for in-vocab w (all unigrams are stored); guards
        // queries against models loaded from incomplete ARPA files.
        return backoff + kLogZero;
    }

    // Maps a raw token to its scoring id; reserved markers count as OOV.
    TokenId scoring_id(const std::string& tok, bool* oov = nullptr) const {
        if (tok == kBos || tok == kEos || tok == kUnk) {
            if (oov) *oov = true;
            return kUnkId;
        }
        auto it = token_to_id_.find(tok);
        if (it == token_to_id_.end()) {
            if (oov) *oov = true;
            return kUnkId;
        }
        return it->second;
    }

    // Sums conditional log10 probabilities of tokens plus the final </s>.
    double sentence_log10_prob(const std::vector<std::string>& tokens, int64_t* oov_count = nullptr) const {
        std::vector<TokenId> ctx{kBosId};
        double total = 0;
        for (const std::string& t : tokens) {
            bool oov = false;
            TokenId id = scoring_id(t, &oov);
            if (oov && oov_count) ++*oov_count;
            total += log10_prob_id(ctx, id);
            ctx.push_back(id);
            if (ctx.size() > static_cast<size_t>(order_ - 1) && ctx.size() > 1) ctx.erase(ctx.begin());
        }
        total += log10_prob_id(ctx, kEosId);
        return total;
    }

    // Each line of text is scored as one sentence; statistics add across
    // lines, so line-by-line and whole-text calls agree exactly.
    PerplexityReport perplexity(std::string_view text) const {
        std::vector<std::string_view> lines;
        size_t start = 0;
        for (size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == '\n') {
                lines.push_back(text.substr(start, i - start));
                start = i + 1;
            }
        }
        if (lines.size() > 1 && lines.back().empty()) lines.pop_back();

        PerplexityReport rep;
        for (std::string_view line : lines) {
            std::vector<std::string> toks = tokenize_for_lm(line);
            rep.total_log10_prob += sentence_log10_prob(toks, &rep.oov_count);
            rep.token_count += static_cast<int64_t>(toks.size()) + 1;
        }
        rep.perplexity = std::pow(10.0, -rep.total_log10_prob / static_cast<double>(rep.token_count));
        return rep;
    }

    void save_arpa(std::ostream& os) const {
        auto fmt = [](double v) {
            char buf[64];
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, p);
        };
        os << "\\data\\\n";
        for (int k = 1; k <= order_; ++k) os << "ngram " << k << "=" << entries_[k - 1].size() << "\n";
        for (int k = 1; k <= order_; ++k) {
            os << "\n\\" << k << "-grams:\n";
            for (const auto& [key, e] : entries_[k - 1]) {
                os << fmt(e.log10_prob);
                std::vector<TokenId> ids = unpack_key(key);
                for (size_t i = 0; i < ids.size(); ++i) os << (i ? " " : "\t") << id_to_token_[ids[i]];
                if (e.has_bow) os << "\t" << fmt(e.log10_bow);
                os << "\n";
            }
        }
        os << "\n\\end\\\n";
    }

    static NGramModel load_arpa(std::istream& is) {
        NGramModel m;
        std::string line;
        std::vector<size_t> declared;
        while (std::getline(is, line) && line.find("\\data\\") == std::string::npos) {
        }
        if (!is) throw std::runtime_error("ARPA: missing \\data\\ header");
        while (std::getline(is, line)) {
            if (line.empty()) break;
            size_t eq = line.find('=');
            if (line.rfind("ngram ", 0) == 0 && eq != std::string::npos)
                declared.push_back(std::stoull(line.substr(eq + 1)));
        }
        if (declared.empty()) throw std::runtime_error("ARPA: no ngram counts declared");
        m.order_ = static_cast<int>(declared.size());
        m.entries_.resize(m.order_);
        m.index_.resize(m.order_);

        // Token ids are assigned in unigram file order; grams at higher
        // orders may then be packed directly.
        int current = 0;
        auto parse_double = [](std::string_view s) {
            double v = 0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc()) throw std::runtime_error("ARPA: bad float: " + std::string(s));
            return v;
        };
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            if (line[0] == '\\') {
                if (line.rfind("\\end\\", 0) == 0) break;
                current = std::stoi(line.substr(1));
                continue;
            }
            if (current == 0) continue;
            size_t t1 = line.find('\t');
            if (t1 == std::string::npos) throw std::runtime_error("ARPA: malformed line: " + line);
            size_t t2 = line.find('\t', t1 + 1);
            Entry e;
            e.log10_prob = parse_double(std::string_view(line).substr(0, t1));
            std::string words = line.substr(t1 + 1, t2 == std::string::npos ? std::string::npos : t2 - t1 - 1);
            if (t2 != std::string::npos) {
                e.log10_bow = parse_double(std::string_view(line).substr(t2 + 1));
                e.has_bow = true;
            }
            std::vector<TokenId> ids;
            size_t pos = 0;
            while (pos <= words.size()) {
                size_t sp = words.find(' ', pos);
                std::string tok = words.substr(pos, sp == std::string::npos ? std::string::npos : sp - pos);
                if (current == 1 && ids.empty()) {
                    auto [it, inserted] = m.token_to_id_.try_emplace(tok, static_cast<TokenId>(m.id_to_token_.size()));
                    if (inserted) m.id_to_token_.push_back(tok);
                    ids.push_back(it->second);
                } else {
                    auto it = m.token_to_id_.find(tok);
                    if (it == m.token_to_id_.end())
                        throw std::runtime_error("ARPA: token not in unigrams: " + tok);
                    ids.push_back(it->second);
                }
                if (sp == std::string::npos) break;
                pos = sp + 1;
            }
            Key key = pack_key(ids);
            m.index_[current - 1][key] = static_cast<uint32_t>(m.entries_[current - 1].size());
            m.entries_[current - 1].emplace_back(std::move(key), e);
        }
        for (int k = 1; k <= m.order_; ++k)
            if (m.entries_[k - 1].size() != declared[k - 1])
                throw std::runtime_error("ARPA: declared/actual gram count mismatch at order " +
                                         std::to_string(k));
        for (const char* req : {kUnk, kBos, kEos})
            if (!m.token_to_id_.count(req))
                throw std::runtime_error(std::string("ARPA: missing reserved token ") + req);
        // Loaded files may use any unigram order; remap reserved ids.
        if (m.token_to_id_[kUnk] != kUnkId || m.token_to_id_[kBos] != kBosId ||
            m.token_to_id_[kEos] != kEosId)
            m = renumber(std::move(m));
        return m;
    }

    static NGramModel estimate(const NgramCounts& counts);

private:
    // Rebuilds a loaded model so reserved tokens occupy their fixed ids.
    static NGramModel renumber(NGramModel&& src) {
        NGramModel m;
        m.order_ = src.order_;
        std::vector<std::string> toks = src.id_to_token_;
        std::sort(toks.begin(), toks.end());
        m.id_to_token_ = {kUnk, kBos, kEos};
        for (const auto& t : toks)
            if (t != kUnk && t != kBos && t != kEos) m.id_to_token_.push_back(t);
        for (TokenId i = 0; i < m.id_to_token_.size(); ++i) m.token_to_id_[m.id_to_token_[i]] = i;
        std::vector<TokenId> remap(src.id_to_token_.size());
        for (TokenId i = 0; i < src.id_to_token_.size(); ++i)
            remap[i] = m.token_to_id_[src.id_to_token_[i]];
        m.entries_.resize(m.order_);
        m.index_.resize(m.order_);
        for (int k = 1; k <= m.order_; ++k) {
            auto& dst = m.entries_[k - 1];
            for (const auto& [key, e] : src.entries_[k - 1]) {
                std::vector<TokenId> ids = unpack_key(key);
                for (TokenId& id : ids) id = remap[id];
                dst.emplace_back(pack_key(ids), e);
            }
            std::sort(dst.begin(), dst.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (uint32_t i = 0; i < dst.size(); ++i) m.index_[k - 1][dst[i].first] = i;
        }
        return m;
    }

    int order_ = 0;
    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, TokenId> token_to_id_;
    std::vector<std::vector<std::pair<Key, Entry>>> entries_;
    std::vector<std::unordered_map<Key, uint32_t>> index_;
    std::vector<Discounts> discounts_;
    std::vector<std::string> notes_;
};

inline NGramModel NGramModel::estimate(const NgramCounts& counts) {
    const int n = counts.order();
    NGramModel m;
    m.order_ = n;

    // Deterministic vocabulary: reserved ids first, then sorted tokens.
    {
        std::vector<std::string> toks;
        for (const auto& [g, c] : counts.table(1))
            if (g != kBos && g != kEos && g != kUnk) toks.push_back(g);
        std::sort(toks.begin(), toks.end());
        if (toks.size() < 2)
            throw std::runtime_error("ngram training needs at least 2 distinct tokens");
        m.id_to_token_ = {kUnk, kBos, kEos};
        m.id_to_token_.insert(m.id_to_token_.end(), toks.begin(), toks.end());
        for (TokenId i = 0; i < m.id_to_token_.size(); ++i) m.token_to_id_[m.id_to_token_[i]] = i;
    }

    auto to_ids = [&](const std::string& joined) {
        std::vector<TokenId> ids;
        size_t pos = 0;
        while (pos <= joined.size()) {
            size_t sep = joined.find('\x1F', pos);
            std::string tok = joined.substr(pos, sep == std::string::npos ? std::string::npos : sep - pos);
            ids.push_back(m.token_to_id_.at(tok));
            if (sep == std::string::npos) break;
            pos = sep + 1;
        }
        return ids;
    };

    // Sorted raw tables keyed by packed ids.
    std::vector<std::vector<std::pair<Key, int64_t>>> raw(n);
    for (int k = 1; k <= n; ++k) {
        raw[k - 1].reserve(counts.table(k).size());
        for (const auto& [g, c] : counts.table(k)) raw[k - 1].emplace_back(pack_key(to_ids(g)), c);
        std::sort(raw[k - 1].begin(), raw[k - 1].end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    // KN-adjusted counts: highest order raw; lower orders continuation
    // types, except grams starting with <s> (nothing can precede them);
    // the <s> unigram itself is excluded from the distribution.
    const Key bos_key = pack_key(std::vector<TokenId>{kBosId});
    std::vector<std::vector<std::pair<Key, int64_t>>> adj(n);
    if (n == 1) {
        for (const auto& kv : raw[0])
            if (kv.first != bos_key) adj[0].push_back(kv);
    } else {
        adj[n - 1] = raw[n - 1];
    }
    for (int k = n - 1; k >= 1; --k) {
        std::unordered_map<Key, int64_t> cont;
        for (const auto& [key, c] : raw[k]) cont[key.substr(4)]++;
        adj[k - 1].reserve(raw[k - 1].size());
        for (const auto& [key, c] : raw[k - 1]) {
            if (k == 1 && key == bos_key) continue;
            bool bos_initial = key.compare(0, 4, bos_key) == 0;
            auto it = cont.find(key);
            adj[k - 1].emplace_back(key, bos_initial ? c : (it == cont.end() ? 0 : it->second));
        }
    }

    m.discounts_.resize(n);
    for (int k = 1; k <= n; ++k) {
        int64_t n1 = 0, n2 = 0, n3 = 0, n4 = 0;
        for (const auto& [key, c] : adj[k - 1]) {
            if (c == 1) ++n1;
            else if (c == 2) ++n2;
            else if (c == 3) ++n3;
            else if (c == 4) ++n4;
        }
        m.discounts_[k - 1] = estimate_discounts(n1, n2, n3, n4);
        if (m.discounts_[k - 1].fallback)
            m.notes_.push_back("order " + std::to_string(k) +
                               ": degenerate count-of-counts, using absolute discount 0.75");
    }

    // Linear-space probabilities, estimated bottom-up. The predictable
    // vocabulary includes <unk> whether or not it was observed.
    const Key unk_key = pack_key(std::vector<TokenId>{kUnkId});
    bool unk_seen = std::any_of(adj[0].begin(), adj[0].end(),
                                [&](const auto& kv) { return kv.first == unk_key; });
    const int64_t vocab_v = static_cast<int64_t>(adj[0].size()) + (unk_seen ? 0 : 1);
    std::vector<std::unordered_map<Key, double>> lin_prob(n);
    std::vector<std::unordered_map<Key, double>> lin_bow(n);

    // Interpolated conditional from the already-built lower orders.
    auto lower_prob = [&](std::span<const TokenId> ctx, TokenId w) {
        double factor = 1.0;
        for (size_t len = ctx.size();; --len) {
            std::vector<TokenId> gram(ctx.end() - len, ctx.end());
            gram.push_back(w);
            auto it = lin_prob[len].find(pack_key(gram));
            if (it != lin_prob[len].end()) return factor * it->second;
            if (len == 0) break;
            std::vector<TokenId> cg(ctx.end() - len, ctx.end());
            auto bit = lin_bow[len - 1].find(pack_key(cg));
            if (bit != lin_bow[len - 1].end()) factor *= bit->second;
        }
        return 0.0;  // unreachable: unigrams cover every token
    };

    // Unigrams.
    {
        const Discounts& d = m.discounts_[0];
        int64_t total = 0, b1 = 0, b2 = 0, b3 = 0;
        for (const auto& [key, c] : adj[0]) {
            total += c;
            if (c == 1) ++b1;
            else if (c == 2) ++b2;
            else ++b3;
        }
        double g1 = (d.d1 * b1 + d.d2 * b2 + d.d3 * b3) / static_cast<double>(total);
        double uniform = g1 / static_cast<double>(vocab_v);
        for (const auto& [key, c] : adj[0]) {
            double p = std::max(static_cast<double>(c) - d.of(c), 0.0) / static_cast<double>(total) + uniform;
            lin_prob[0][key] = p;
        }
        lin_prob[0].try_emplace(unk_key, uniform);
    }

    // Higher orders: walk the sorted gram list grouping by context.
    for (int k = 2; k <= n; ++k) {
        const Discounts& d = m.discounts_[k - 1];
        auto& grams = adj[k - 1];
        size_t i = 0;
        while (i < grams.size()) {
            size_t j = i;
            Key ctx_key = grams[i].first.substr(0, 4 * (k - 1));
            int64_t total = 0, b1 = 0, b2 = 0, b3 = 0;
            while (j < grams.size() && grams[j].first.compare(0, 4 * (k - 1), ctx_key) == 0) {
                int64_t c = grams[j].second;
                total += c;
                if (c == 1) ++b1;
                else if (c == 2) ++b2;
                else ++b3;
                ++j;
            }
            double gamma = (d.d1 * b1 + d.d2 * b2 + d.d3 * b3) / static_cast<double>(total);
            lin_bow[k - 2][ctx_key] = gamma;
            std::vector<TokenId> ctx_ids = unpack_key(ctx_key);
            std::span<const TokenId> shorter(ctx_ids.data() + 1, ctx_ids.size() - 1);
            for (size_t g = i; g < j; ++g) {
                int64_t c = grams[g].second;
                TokenId w = unpack_key(grams[g].first).back();
                double p = std::max(static_cast<double>(c) - d.of(c), 0.0) / static_cast<double>(total) +
                           gamma * lower_prob(shorter, w);
                lin_prob[k - 1][grams[g].first] = p;
            }
            i = j;
        }
    }

    // Assemble sorted entries in log10 space. The <s> unigram is stored
    // with a placeholder probability but keeps its real backoff weight.
    m.entries_.resize(n);
    m.index_.resize(n);
    for (int k = 1; k <= n; ++k) {
        std::vector<Key> keys;
        keys.reserve(lin_prob[k - 1].size() + (k == 1 ? 1 : 0));
        for (const auto& [key, p] : lin_prob[k - 1]) keys.push_back(key);
        if (k == 1) keys.push_back(bos_key);
        std::sort(keys.begin(), keys.end());
        for (const Key& key : keys) {
            Entry e;
            if (k == 1 && key == bos_key) {
                e.log10_prob = kLogZero;
            } else {
                e.log10_prob = std::log10(lin_prob[k - 1].at(key));
                if (e.log10_prob < kLogZero) e.log10_prob = kLogZero;
            }
            if (k < n) {
                auto bit = lin_bow[k - 1].find(key);
                if (bit != lin_bow[k - 1].end()) {
                    e.has_bow = true;
                    e.log10_bow = bit->second > 0
                                      ? std::max(std::log10(bit->second), kLogZero)
                                      : kLogZero;
                }
            }
            m.index_[k - 1][key] = static_cast<uint32_t>(m.entries_[k - 1].size());
            m.entries_[k - 1].emplace_back(key, e);
        }
    }
    return m;
}

inline NGramModel train_ngram(const std::vector<std::vector<std::string>>& sentences, int order) {
    if (sentences.empty()) throw std::invalid_argument("ngram training corpus is empty");
    NgramCounts counts(order);
    for (const auto& s : sentences) counts.add_sentence(s);
    return NGramModel::estimate(counts);
}

// Convenience for text corpora: one line = one sentence, canonical tokens.
inline NGramModel train_ngram_on_text(std::string_view text, int order) {
    std::vector<std::vector<std::string>> sentences;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::vector<std::string> toks = tokenize_for_lm(text.substr(start, i - start));
            if (!toks.empty()) sentences.push_back(std::move(toks));
            start = i + 1;
        }
    }
    return train_ngram(sentences, order);
}

}  // namespace corpusprep::ngram
