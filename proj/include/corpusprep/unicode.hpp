#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "corpusprep/detail/unicode_data.hpp"

namespace corpusprep::unicode {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes one UTF-8 scalar starting at s[i]. Advances i past the sequence
// (or past one byte on malformed input, yielding U+FFFD).
inline char32_t decode_utf8(std::string_view s, size_t& i) {
    const auto byte = [&](size_t k) { return static_cast<uint8_t>(s[k]); };
    uint8_t b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kReplacement;
    }
    if (i + len > s.size()) {
        ++i;
        return kReplacement;
    }
    for (size_t k = 1; k < len; ++k) {
        uint8_t b = byte(i + k);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kReplacement;
    }
    i += len;
    return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::u32string to_utf32(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) out.push_back(decode_utf8(s, i));
    return out;
}

inline std::string to_utf8(const std::u32string& s) {
    std::string out;
    out.reserve(s.size() * 2);
    for (char32_t cp : s) append_utf8(out, cp);
    return out;
}

inline size_t scalar_count(std::string_view s) {
    size_t i = 0, n = 0;
    while (i < s.size()) {
        decode_utf8(s, i);
        ++n;
    }
    return n;
}

namespace detail_lookup {

inline int find_u32(const uint32_t* keys, size_t n, uint32_t cp) {
    const uint32_t* end = keys + n;
    const uint32_t* it = std::lower_bound(keys, end, cp);
    return (it != end && *it == cp) ? static_cast<int>(it - keys) : -1;
}

inline bool in_ranges(const uint32_t* ranges, size_t n_vals, uint32_t cp) {
    // ranges holds [start0, end0, start1, end1, ...]
    size_t lo = 0, hi = n_vals / 2;
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (cp < ranges[2 * mid]) {
            hi = mid;
        } else if (cp > ranges[2 * mid + 1]) {
            lo = mid + 1;
        } else {
            return true;
        }
    }
    return false;
}

}  // namespace detail_lookup

inline bool is_whitespace(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

inline bool is_punctuation(char32_t cp) {
    using namespace corpusprep::detail;
    return detail_lookup::in_ranges(kPunctRange, std::size(kPunctRange), cp);
}

inline bool is_digit(char32_t cp) {
    using namespace corpusprep::detail;
    return detail_lookup::in_ranges(kDigitRange, std::size(kDigitRange), cp);
}

inline char32_t to_lower(char32_t cp) {
    using namespace corpusprep::detail;
    int idx = detail_lookup::find_u32(kLowerKey, std::size(kLowerKey), cp);
    return idx < 0 ? cp : kLowerVal[idx];
}

inline std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) append_utf8(out, to_lower(decode_utf8(s, i)));
    return out;
}

inline uint8_t combining_class(char32_t cp) {
    using namespace corpusprep::detail;
    int idx = detail_lookup::find_u32(kCccKey, std::size(kCccKey), cp);
    return idx < 0 ? 0 : kCccVal[idx];
}

namespace detail_nfc {

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19, kHangulVCount = 21, kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

inline void decompose_cp(char32_t cp, std::u32string& out) {
    using namespace corpusprep::detail;
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        char32_t idx = cp - kHangulSBase;
        out.push_back(kHangulLBase + idx / kHangulNCount);
        out.push_back(kHangulVBase + (idx % kHangulNCount) / kHangulTCount);
        char32_t t = idx % kHangulTCount;
        if (t) out.push_back(kHangulTBase + t);
        return;
    }
    int i = detail_lookup::find_u32(kDecompKey, std::size(kDecompKey), cp);
    if (i < 0) {
        out.push_back(cp);
        return;
    }
    for (uint32_t k = kDecompOffset[i]; k < kDecompOffset[i + 1]; ++k)
        out.push_back(kDecompData[k]);
}

inline char32_t compose_pair(char32_t a, char32_t b) {
    using namespace corpusprep::detail;
    if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount && b >= kHangulVBase &&
        b < kHangulVBase + kHangulVCount) {
        return kHangulSBase + ((a - kHangulLBase) * kHangulVCount + (b - kHangulVBase)) * kHangulTCount;
    }
    if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount && (a - kHangulSBase) % kHangulTCount == 0 &&
        b > kHangulTBase && b < kHangulTBase + kHangulTCount) {
        return a + (b - kHangulTBase);
    }
    uint64_t key = (static_cast<uint64_t>(a) << 32) | b;
    const uint64_t* begin = kCompKey;
    const uint64_t* end = kCompKey + std::size(kCompKey);
    const uint64_t* it = std::lower_bound(begin, end, key);
    return (it != end && *it == key) ? kCompVal[it - begin] : 0;
}

}  // namespace detail_nfc

// Canonical composition (NFC) of a UTF-8 string. Malformed input bytes
// become U+FFFD before normalization.
inline std::string nfc(std::string_view s) {
    std::u32string d;
    d.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) detail_nfc::decompose_cp(decode_utf8(s, i), d);

    // Canonical ordering: stable-sort runs of nonzero combining class.
    for (size_t k = 1; k < d.size(); ++k) {
        uint8_t cc = combining_class(d[k]);
        if (cc == 0) continue;
        size_t j = k;
        while (j > 0 && combining_class(d[j - 1]) > cc) {
            std::swap(d[j - 1], d[j]);
            --j;
        }
    }

    std::u32string out;
    out.reserve(d.size());
    ptrdiff_t last_starter = -1;
    for (char32_t c : d) {
        if (last_starter >= 0) {
            uint8_t cc = combining_class(c);
            bool blocked = out.size() > static_cast<size_t>(last_starter) + 1 &&
                           combining_class(out.back()) >= cc;
            if (cc == 0) blocked = out.size() > static_cast<size_t>(last_starter) + 1;
            if (!blocked) {
                char32_t comp = detail_nfc::compose_pair(out[last_starter], c);
                if (comp) {
                    out[last_starter] = comp;
                    continue;
                }
            }
        }
        if (combining_class(c) == 0) last_starter = static_cast<ptrdiff_t>(out.size());
        out.push_back(c);
    }
    return to_utf8(out);
}

// Collapses runs of Unicode whitespace to a single ASCII space and trims.
inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending = false;
    size_t i = 0;
    while (i < s.size()) {
        char32_t cp = decode_utf8(s, i);
        if (is_whitespace(cp)) {
            pending = !out.empty();
        } else {
            if (pending) out.push_back(' ');
            pending = false;
            append_utf8(out, cp);
        }
    }
    return out;
}

// Splits on Unicode whitespace; empty tokens never produced.
inline std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    size_t i = 0;
    while (i < s.size()) {
        char32_t cp = decode_utf8(s, i);
        if (is_whitespace(cp)) {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            append_utf8(cur, cp);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

}  // namespace corpusprep::unicode
