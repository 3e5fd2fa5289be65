#pragma once

// Naive BPE reference trainer: every iteration recounts all adjacent
// symbol pairs from scratch by scanning every word. Independent of the
// library trainer; tests compare full merge sequences.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bpe_oracle {

struct Merge {
    std::string left, right;
    long long freq;
};

inline bool is_byte_symbol(const std::string& s) {
    return s.size() == 6 && s.rfind("<0x", 0) == 0 && s[5] == '>' && std::isxdigit(s[3]) &&
           std::isxdigit(s[4]);
}

inline bool reserved_string(const std::string& s) {
    return is_byte_symbol(s) || s == "<s>" || s == "</s>" || s == "<pad>" || s == "<unk>" ||
           s == "<mask>";
}

// Splits a UTF-8 word into base symbols the same way the trainer does:
// the boundary marker is glued to the first character; literal U+2581
// characters become byte symbols.
inline std::vector<std::string> base_symbols(const std::string& word) {
    static const std::string marker = "\xE2\x96\x81";
    std::vector<std::string> out;
    size_t i = 0;
    bool first = true;
    while (i < word.size()) {
        size_t len = 1;
        unsigned char b = word[i];
        if ((b & 0xE0) == 0xC0) len = 2;
        else if ((b & 0xF0) == 0xE0) len = 3;
        else if ((b & 0xF8) == 0xF0) len = 4;
        std::string ch = word.substr(i, len);
        if (ch == marker) {
            if (first) out.push_back(marker);
            char buf[8];
            for (char c : ch) {
                std::snprintf(buf, sizeof buf, "<0x%02X>", static_cast<unsigned char>(c));
                out.push_back(buf);
            }
            first = false;
        } else {
            out.push_back(first ? marker + ch : ch);
            first = false;
        }
        i += len;
    }
    return out;
}

// Runs greedy BPE and returns the merge sequence. max_merges < 0 means
// merge until no pair occurs at least twice.
inline std::vector<Merge> merge_sequence(const std::map<std::string, long long>& word_freq,
                                         long long max_merges = -1) {
    std::vector<std::vector<std::string>> words;
    std::vector<long long> freqs;
    for (const auto& [w, f] : word_freq) {
        words.push_back(base_symbols(w));
        freqs.push_back(f);
    }

    std::vector<Merge> out;
    while (max_merges < 0 || static_cast<long long>(out.size()) < max_merges) {
        std::map<std::pair<std::string, std::string>, long long> counts;
        for (size_t w = 0; w < words.size(); ++w)
            for (size_t i = 0; i + 1 < words[w].size(); ++i) {
                if (is_byte_symbol(words[w][i]) || is_byte_symbol(words[w][i + 1])) continue;
                counts[{words[w][i], words[w][i + 1]}] += freqs[w];
            }

        std::pair<std::string, std::string> best;
        long long best_count = 0;
        for (const auto& [pair, c] : counts) {
            if (c < 2 || reserved_string(pair.first + pair.second)) continue;
            // std::map iterates in lexicographic pair order, so the first
            // entry with the max count is the tie-break winner.
            if (c > best_count) {
                best = pair;
                best_count = c;
            }
        }
        if (best_count < 2) break;

        std::string merged = best.first + best.second;
        for (auto& word : words) {
            std::vector<std::string> next;
            for (size_t i = 0; i < word.size(); ++i) {
                if (i + 1 < word.size() && word[i] == best.first && word[i + 1] == best.second) {
                    next.push_back(merged);
                    ++i;
                } else {
                    next.push_back(word[i]);
                }
            }
            word = std::move(next);
        }
        out.push_back({best.first, best.second, best_count});
    }
    return out;
}

}  // namespace bpe_oracle
