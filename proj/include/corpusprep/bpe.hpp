#pragma once

// Byte Pair Encoding vocabulary trainer and lossless encoder/decoder.
//
// Conventions (SentencePiece-style): words are whitespace-delimited, a
// U+2581 marker is glued to word-initial pieces, and a dummy leading
// space is assumed for the first word so that running text and isolated
// strings tokenize identically. Characters outside the trained alphabet
// fall back to byte pieces <0x00>..<0xFF>, so decode(encode(x)) == x for
// every UTF-8 input and <unk> is never produced by encoding.

#include <cstdint>
#include <fstream>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "corpusprep/unicode.hpp"

namespace corpusprep::bpe {

inline constexpr uint32_t kBosId = 0;   // <s>, CLS role
inline constexpr uint32_t kPadId = 1;   // <pad>
inline constexpr uint32_t kEosId = 2;   // </s>, SEP role
inline constexpr uint32_t kUnkId = 3;   // <unk>
inline constexpr uint32_t kMaskId = 4;  // <mask>
inline constexpr uint32_t kNumSpecials = 5;
inline constexpr uint32_t kFirstByteId = kNumSpecials;           // <0x00>
inline constexpr uint32_t kFirstRegularId = kNumSpecials + 256;  // past <0xFF>

inline const std::string kMarker = "\xE2\x96\x81";  // U+2581

inline const char* special_name(uint32_t id) {
    switch (id) {
        case kBosId: return "<s>";
        case kPadId: return "<pad>";
        case kEosId: return "</s>";
        case kUnkId: return "<unk>";
        case kMaskId: return "<mask>";
        default: return nullptr;
    }
}

inline std::string byte_token(uint8_t b) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "<0x%02X>", b);
    return buf;
}

// True for strings that must never be minted as regular pieces.
inline bool is_reserved_string(const std::string& s) {
    if (s == "<s>" || s == "</s>" || s == "<pad>" || s == "<unk>" || s == "<mask>") return true;
    return s.size() == 6 && s.rfind("<0x", 0) == 0 && s[5] == '>' &&
           std::isxdigit(static_cast<unsigned char>(s[3])) &&
           std::isxdigit(static_cast<unsigned char>(s[4]));
}

struct PairHash {
    size_t operator()(const std::pair<uint32_t, uint32_t>& p) const {
        return (static_cast<size_t>(p.first) << 32) ^ p.second;
    }
};

class BpeVocab {
public:
    const std::vector<std::pair<std::string, std::string>>& merges() const { return merges_; }
    size_t size() const { return id_to_token_.size(); }
    const std::string& token(uint32_t id) const { return id_to_token_.at(id); }

    bool contains(const std::string& tok) const { return token_to_id_.count(tok) > 0; }
    uint32_t id_of(const std::string& tok) const {
        auto it = token_to_id_.find(tok);
        if (it == token_to_id_.end()) throw std::out_of_range("bpe: unknown token: " + tok);
        return it->second;
    }

    static bool is_byte_id(uint32_t id) { return id >= kFirstByteId && id < kFirstRegularId; }
    static bool is_special_id(uint32_t id) { return id < kNumSpecials; }

    // Rank of a merge pair, or UINT32_MAX when the pair was never merged.
    uint32_t merge_rank(uint32_t left, uint32_t right) const {
        auto it = merge_rank_.find({left, right});
        return it == merge_rank_.end() ? UINT32_MAX : it->second;
    }
    uint32_t merge_result(uint32_t left, uint32_t right) const {
        return merge_result_.at({left, right});
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["merges"] = nlohmann::json::array();
        for (const auto& [l, r] : merges_) j["merges"].push_back({l, r});
        nlohmann::ordered_json vocab = nlohmann::ordered_json::object();
        for (uint32_t id = 0; id < id_to_token_.size(); ++id) vocab[id_to_token_[id]] = id;
        j["vocab"] = std::move(vocab);
        j["specials"] = {{"<s>", kBosId},   {"<pad>", kPadId}, {"</s>", kEosId},
                         {"<unk>", kUnkId}, {"<mask>", kMaskId}};
        return j;
    }

    void save(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("bpe: cannot write " + path);
        os << to_json().dump(1, '\t') << "\n";
    }

    void save_merges_txt(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("bpe: cannot write " + path);
        for (const auto& [l, r] : merges_) os << l << " " << r << "\n";
    }

    static BpeVocab from_json(const nlohmann::json& j) {
        BpeVocab v;
        const auto& vocab = j.at("vocab");
        v.id_to_token_.resize(vocab.size());
        for (auto it = vocab.begin(); it != vocab.end(); ++it) {
            uint32_t id = it.value().get<uint32_t>();
            if (id >= v.id_to_token_.size() || !v.id_to_token_[id].empty())
                throw std::runtime_error("bpe: vocab ids are not dense");
            v.id_to_token_[id] = it.key();
        }
        for (uint32_t id = 0; id < v.id_to_token_.size(); ++id)
            v.token_to_id_[v.id_to_token_[id]] = id;
        for (uint32_t id = 0; id < kNumSpecials; ++id)
            if (v.id_to_token_[id] != special_name(id))
                throw std::runtime_error("bpe: special token layout mismatch");
        for (uint32_t b = 0; b < 256; ++b)
            if (v.id_to_token_[kFirstByteId + b] != byte_token(static_cast<uint8_t>(b)))
                throw std::runtime_error("bpe: byte token layout mismatch");
        for (const auto& m : j.at("merges")) {
            v.merges_.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
        }
        v.build_merge_index();
        return v;
    }

    static BpeVocab load(const std::string& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw std::runtime_error("bpe: cannot read " + path);
        nlohmann::json j;
        is >> j;
        return from_json(j);
    }

private:
    friend BpeVocab train_bpe(const std::unordered_map<std::string, int64_t>&, size_t);

    void build_merge_index() {
        for (uint32_t rank = 0; rank < merges_.size(); ++rank) {
            const auto& [l, r] = merges_[rank];
            std::pair<uint32_t, uint32_t> key{id_of(l), id_of(r)};
            if (!merge_rank_.count(key)) {
                merge_rank_[key] = rank;
                merge_result_[key] = id_of(l + r);
            }
        }
    }

    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, uint32_t> token_to_id_;
    std::vector<std::pair<std::string, std::string>> merges_;
    std::unordered_map<std::pair<uint32_t, uint32_t>, uint32_t, PairHash> merge_rank_;
    std::unordered_map<std::pair<uint32_t, uint32_t>, uint32_t, PairHash> merge_result_;
};

namespace detail {

// Greedy trainer state: words as id sequences plus incrementally
// maintained pair counts and a lazy max-heap keyed by (count, strings).
struct HeapItem {
    int64_t count;
    std::string left, right;
    std::pair<uint32_t, uint32_t> ids;
};
struct HeapLess {
    bool operator()(const HeapItem& a, const HeapItem& b) const {
        if (a.count != b.count) return a.count < b.count;
        if (a.left != b.left) return a.left > b.left;
        return a.right > b.right;
    }
};

}  // namespace detail

// Trains a vocabulary from a word frequency table. vocab_size caps the
// total token count (specials + bytes + alphabet + merges).
inline BpeVocab train_bpe(const std::unordered_map<std::string, int64_t>& word_freq,
                          size_t vocab_size) {
    if (word_freq.empty()) throw std::invalid_argument("bpe: empty training corpus");

    BpeVocab v;
    for (uint32_t id = 0; id < kNumSpecials; ++id) v.id_to_token_.push_back(special_name(id));
    for (uint32_t b = 0; b < 256; ++b) v.id_to_token_.push_back(byte_token(static_cast<uint8_t>(b)));

    // Deterministic word order.
    std::vector<std::pair<std::string, int64_t>> words_sorted(word_freq.begin(), word_freq.end());
    std::sort(words_sorted.begin(), words_sorted.end());

    // Base alphabet: marker-prefixed first characters, plain remainder
    // characters, and the bare marker (used when a word-initial character
    // has no prefixed symbol at encode time).
    std::vector<std::vector<std::string>> word_syms(words_sorted.size());
    std::unordered_set<std::string> alphabet{kMarker};
    for (size_t w = 0; w < words_sorted.size(); ++w) {
        const std::string& word = words_sorted[w].first;
        size_t i = 0;
        bool first = true;
        while (i < word.size()) {
            size_t start = i;
            char32_t cp = unicode::decode_utf8(word, i);
            std::string ch = word.substr(start, i - start);
            if (cp == U'▁') {
                // Literal marker characters always go through byte pieces;
                // the word-boundary marker itself still marks the start.
                if (first) word_syms[w].push_back(kMarker);
                for (char c : ch) word_syms[w].push_back(byte_token(static_cast<uint8_t>(c)));
            } else {
                std::string sym = first ? kMarker + ch : ch;
                alphabet.insert(sym);
                word_syms[w].push_back(std::move(sym));
            }
            first = false;
        }
    }

    size_t min_vocab = v.id_to_token_.size() + alphabet.size();
    if (vocab_size < min_vocab)
        throw std::invalid_argument("bpe: vocab_size " + std::to_string(vocab_size) +
                                    " < alphabet + specials (" + std::to_string(min_vocab) + ")");

    std::vector<std::string> alpha_sorted(alphabet.begin(), alphabet.end());
    std::sort(alpha_sorted.begin(), alpha_sorted.end());
    for (const std::string& s : alpha_sorted) v.id_to_token_.push_back(s);
    for (uint32_t id = 0; id < v.id_to_token_.size(); ++id) v.token_to_id_[v.id_to_token_[id]] = id;

    // Words as id sequences.
    std::vector<std::vector<uint32_t>> words(words_sorted.size());
    std::vector<int64_t> freqs(words_sorted.size());
    for (size_t w = 0; w < words_sorted.size(); ++w) {
        freqs[w] = words_sorted[w].second;
        words[w].reserve(word_syms[w].size());
        for (const std::string& s : word_syms[w]) words[w].push_back(v.token_to_id_.at(s));
    }
    word_syms.clear();
    word_syms.shrink_to_fit();

    using Pair = std::pair<uint32_t, uint32_t>;
    std::unordered_map<Pair, int64_t, PairHash> counts;
    std::unordered_map<Pair, std::unordered_set<uint32_t>, PairHash> where;
    auto countable = [](uint32_t id) { return id >= kFirstRegularId; };
    for (size_t w = 0; w < words.size(); ++w)
        for (size_t i = 0; i + 1 < words[w].size(); ++i) {
            if (!countable(words[w][i]) || !countable(words[w][i + 1])) continue;
            Pair p{words[w][i], words[w][i + 1]};
            counts[p] += freqs[w];
            where[p].insert(static_cast<uint32_t>(w));
        }

    std::priority_queue<detail::HeapItem, std::vector<detail::HeapItem>, detail::HeapLess> heap;
    for (const auto& [p, c] : counts)
        heap.push({c, v.id_to_token_[p.first], v.id_to_token_[p.second], p});

    std::unordered_set<Pair, PairHash> banned;
    while (v.id_to_token_.size() < vocab_size && !heap.empty()) {
        detail::HeapItem top = heap.top();
        heap.pop();
        auto it = counts.find(top.ids);
        if (it == counts.end() || it->second != top.count || banned.count(top.ids)) continue;
        if (top.count < 2) break;
        std::string merged = top.left + top.right;
        if (is_reserved_string(merged)) {
            // Such a piece would be ambiguous with control tokens; the
            // pair is permanently ineligible.
            banned.insert(top.ids);
            continue;
        }

        uint32_t new_id = static_cast<uint32_t>(v.id_to_token_.size());
        v.id_to_token_.push_back(merged);
        v.token_to_id_[merged] = new_id;
        v.merges_.emplace_back(top.left, top.right);
        counts.erase(it);  // every occurrence is about to be rewritten away

        std::unordered_set<uint32_t> affected = std::move(where[top.ids]);
        where.erase(top.ids);
        std::unordered_set<Pair, PairHash> dirty;
        for (uint32_t w : affected) {
            auto& word = words[w];
            // Retract this word's pair contributions, rewrite, re-add.
            for (size_t i = 0; i + 1 < word.size(); ++i) {
                if (!countable(word[i]) || !countable(word[i + 1])) continue;
                Pair p{word[i], word[i + 1]};
                auto cit = counts.find(p);
                if (cit != counts.end()) {
                    cit->second -= freqs[w];
                    dirty.insert(p);
                }
            }
            std::vector<uint32_t> next;
            next.reserve(word.size());
            for (size_t i = 0; i < word.size(); ++i) {
                if (i + 1 < word.size() && word[i] == top.ids.first && word[i + 1] == top.ids.second) {
                    next.push_back(new_id);
                    ++i;
                } else {
                    next.push_back(word[i]);
                }
            }
            word = std::move(next);
            for (size_t i = 0; i + 1 < word.size(); ++i) {
                if (!countable(word[i]) || !countable(word[i + 1])) continue;
                Pair p{word[i], word[i + 1]};
                counts[p] += freqs[w];
                where[p].insert(w);
                dirty.insert(p);
            }
        }
        for (const Pair& p : dirty) {
            auto cit = counts.find(p);
            if (cit != counts.end() && cit->second >= 2 && !banned.count(p))
                heap.push({cit->second, v.id_to_token_[p.first], v.id_to_token_[p.second], p});
        }
    }

    v.build_merge_index();
    return v;
}

inline BpeVocab train_bpe_on_text(std::string_view text, size_t vocab_size) {
    std::unordered_map<std::string, int64_t> freq;
    for (std::string& w : unicode::split_whitespace(text)) freq[std::move(w)]++;
    return train_bpe(freq, vocab_size);
}

// Stateless encoding helpers; Encoder adds a per-word memo for bulk use.
namespace detail {

inline void append_bytes(const BpeVocab&, std::string_view utf8, std::vector<uint32_t>& out) {
    for (char c : utf8) out.push_back(kFirstByteId + static_cast<uint8_t>(c));
}

inline std::vector<uint32_t> encode_word(const BpeVocab& v, std::string_view word, bool prefixed) {
    std::vector<uint32_t> syms;
    size_t i = 0;
    bool first = true;
    while (i < word.size()) {
        size_t start = i;
        char32_t cp = unicode::decode_utf8(word, i);
        std::string ch(word.substr(start, i - start));
        if (cp == U'▁') {
            if (first && prefixed) syms.push_back(v.id_of(kMarker));
            append_bytes(v, ch, syms);
        } else if (first && prefixed) {
            if (std::string pch = kMarker + ch; v.contains(pch)) {
                syms.push_back(v.id_of(pch));
            } else {
                syms.push_back(v.id_of(kMarker));
                if (v.contains(ch)) syms.push_back(v.id_of(ch));
                else append_bytes(v, ch, syms);
            }
        } else {
            if (v.contains(ch) && v.id_of(ch) >= kFirstRegularId) syms.push_back(v.id_of(ch));
            else append_bytes(v, ch, syms);
        }
        first = false;
    }

    // Apply merges lowest rank first; all occurrences at once.
    while (syms.size() > 1) {
        uint32_t best_rank = UINT32_MAX;
        for (size_t i2 = 0; i2 + 1 < syms.size(); ++i2)
            best_rank = std::min(best_rank, v.merge_rank(syms[i2], syms[i2 + 1]));
        if (best_rank == UINT32_MAX) break;
        std::vector<uint32_t> next;
        next.reserve(syms.size());
        for (size_t i2 = 0; i2 < syms.size(); ++i2) {
            if (i2 + 1 < syms.size() && v.merge_rank(syms[i2], syms[i2 + 1]) == best_rank) {
                next.push_back(v.merge_result(syms[i2], syms[i2 + 1]));
                ++i2;
            } else {
                next.push_back(syms[i2]);
            }
        }
        syms = std::move(next);
    }
    return syms;
}

}  // namespace detail

class Encoder {
public:
    explicit Encoder(const BpeVocab& vocab) : vocab_(vocab) {}

    std::vector<uint32_t> encode(std::string_view text) const {
        std::vector<uint32_t> out;
        if (text.empty()) return out;

        // A dummy leading space makes the first word marker-prefixed,
        // exactly like a word in running text; decode strips it again.
        std::string padded = " ";
        padded += text;
        size_t i = 0;
        while (i < padded.size()) {
            // Gap: maximal whitespace run.
            size_t gap_start = i;
            size_t probe = i;
            while (probe < padded.size()) {
                size_t next = probe;
                if (!unicode::is_whitespace(unicode::decode_utf8(padded, next))) break;
                probe = next;
            }
            size_t gap_end = probe;
            // Word: maximal non-whitespace run.
            size_t word_start = gap_end;
            while (probe < padded.size()) {
                size_t next = probe;
                if (unicode::is_whitespace(unicode::decode_utf8(padded, next))) break;
                probe = next;
            }
            size_t word_end = probe;

            std::string_view gap(padded.data() + gap_start, gap_end - gap_start);
            std::string_view word(padded.data() + word_start, word_end - word_start);
            bool absorb = !word.empty() && !gap.empty() && gap.back() == ' ';
            if (absorb) gap.remove_suffix(1);
            encode_gap(gap, out);
            if (!word.empty()) encode_word_cached(word, absorb, out);
            i = word_end;
        }
        return out;
    }

    std::string decode(std::span<const uint32_t> ids) const {
        std::string out;
        for (uint32_t id : ids) {
            if (id >= vocab_.size()) throw std::out_of_range("bpe: id out of range: " + std::to_string(id));
            if (BpeVocab::is_special_id(id)) continue;
            if (BpeVocab::is_byte_id(id)) {
                out.push_back(static_cast<char>(id - kFirstByteId));
                continue;
            }
            const std::string& piece = vocab_.token(id);
            if (piece.rfind(kMarker, 0) == 0) {
                out.push_back(' ');
                out.append(piece, kMarker.size(), std::string::npos);
            } else {
                out.append(piece);
            }
        }
        if (!out.empty() && out.front() == ' ') out.erase(out.begin());
        return out;
    }

private:
    void encode_gap(std::string_view gap, std::vector<uint32_t>& out) const {
        size_t i = 0;
        while (i < gap.size()) {
            size_t start = i;
            unicode::decode_utf8(gap, i);
            std::string ch(gap.substr(start, i - start));
            if (vocab_.contains(ch) && vocab_.id_of(ch) >= kFirstRegularId)
                out.push_back(vocab_.id_of(ch));
            else
                detail::append_bytes(vocab_, ch, out);
        }
    }

    void encode_word_cached(std::string_view word, bool prefixed, std::vector<uint32_t>& out) const {
        std::string key(word);
        key.push_back(prefixed ? '\x01' : '\x00');
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(std::move(key), detail::encode_word(vocab_, word, prefixed)).first;
            if (cache_.size() > kMaxCache) cache_.clear();
        }
        out.insert(out.end(), it->second.begin(), it->second.end());
    }

    static constexpr size_t kMaxCache = 1 << 20;
    const BpeVocab& vocab_;
    mutable std::unordered_map<std::string, std::vector<uint32_t>> cache_;
};

inline std::vector<uint32_t> encode(const BpeVocab& v, std::string_view text) {
    return Encoder(v).encode(text);
}

inline std::string decode(const BpeVocab& v, std::span<const uint32_t> ids) {
    return Encoder(v).decode(ids);
}

}  // namespace corpusprep::bpe
