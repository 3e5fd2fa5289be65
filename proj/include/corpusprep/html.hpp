#pragma once

// Error-tolerant HTML scanning for real-world tag soup: a flat token
// scanner (no DOM), entity decoding, and raw-text element handling.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpusprep/unicode.hpp"

namespace corpusprep::html {

inline const std::unordered_map<std::string, char32_t>& named_entities() {
    static const std::unordered_map<std::string, char32_t> map = {
        {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
        {"apos", '\''},    {"nbsp", 0xA0},    {"copy", 0xA9},    {"reg", 0xAE},
        {"deg", 0xB0},     {"plusmn", 0xB1},  {"sup2", 0xB2},    {"sup3", 0xB3},
        {"micro", 0xB5},   {"para", 0xB6},    {"middot", 0xB7},  {"laquo", 0xAB},
        {"raquo", 0xBB},   {"frac12", 0xBD},  {"frac14", 0xBC},  {"times", 0xD7},
        {"divide", 0xF7},  {"szlig", 0xDF},   {"agrave", 0xE0},  {"aacute", 0xE1},
        {"acirc", 0xE2},   {"atilde", 0xE3},  {"auml", 0xE4},    {"aring", 0xE5},
        {"aelig", 0xE6},   {"ccedil", 0xE7},  {"egrave", 0xE8},  {"eacute", 0xE9},
        {"ecirc", 0xEA},   {"euml", 0xEB},    {"igrave", 0xEC},  {"iacute", 0xED},
        {"icirc", 0xEE},   {"iuml", 0xEF},    {"ntilde", 0xF1},  {"ograve", 0xF2},
        {"oacute", 0xF3},  {"ocirc", 0xF4},   {"otilde", 0xF5},  {"ouml", 0xF6},
        {"oslash", 0xF8},  {"ugrave", 0xF9},  {"uacute", 0xFA},  {"ucirc", 0xFB},
        {"uuml", 0xFC},    {"yacute", 0xFD},  {"yuml", 0xFF},    {"Aogon", 0x104},
        {"aogon", 0x105},  {"Cacute", 0x106}, {"cacute", 0x107}, {"Eogon", 0x118},
        {"eogon", 0x119},  {"Lstrok", 0x141}, {"lstrok", 0x142}, {"Nacute", 0x143},
        {"nacute", 0x144}, {"Sacute", 0x15A}, {"sacute", 0x15B}, {"Zacute", 0x179},
        {"zacute", 0x17A}, {"Zdot", 0x17B},   {"zdot", 0x17C},   {"ndash", 0x2013},
        {"mdash", 0x2014}, {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"sbquo", 0x201A},
        {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"bdquo", 0x201E}, {"dagger", 0x2020},
        {"bull", 0x2022},  {"hellip", 0x2026},{"permil", 0x2030},{"euro", 0x20AC},
        {"trade", 0x2122}, {"shy", 0xAD},     {"sect", 0xA7},    {"hearts", 0x2665},
    };
    return map;
}

// Decodes &name;, &#123; and &#xAB; references; unknown references pass
// through verbatim.
inline std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        size_t semi = s.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(s[i++]);
            continue;
        }
        std::string_view body = s.substr(i + 1, semi - i - 1);
        char32_t cp = 0;
        bool ok = false;
        if (!body.empty() && body[0] == '#') {
            uint64_t v = 0;
            size_t k = 1;
            bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
            if (hex) k = 2;
            bool any = false;
            for (; k < body.size(); ++k) {
                char c = body[k];
                int digit;
                if (c >= '0' && c <= '9') digit = c - '0';
                else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
                else { any = false; break; }
                v = v * (hex ? 16 : 10) + static_cast<uint64_t>(digit);
                any = true;
                if (v > 0x10FFFF) { any = false; break; }
            }
            if (any) {
                cp = static_cast<char32_t>(v);
                ok = true;
            }
        } else {
            auto it = named_entities().find(std::string(body));
            if (it != named_entities().end()) {
                cp = it->second;
                ok = true;
            }
        }
        if (ok && cp != 0) {
            unicode::append_utf8(out, cp);
            i = semi + 1;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

struct Attr {
    std::string name;   // lowercased
    std::string value;  // entity-decoded
};

struct Token {
    enum class Kind { text, open, close, eof } kind = Kind::eof;
    std::string_view text;       // raw text slice, entities not yet decoded
    std::string name;            // tag name, lowercased
    bool self_closing = false;
    std::vector<Attr> attrs;

    const std::string* attr(std::string_view n) const {
        for (const Attr& a : attrs)
            if (a.name == n) return &a.value;
        return nullptr;
    }
};

inline bool is_void_element(std::string_view t) {
    static const char* kVoid[] = {"area", "base", "br",     "col",  "embed", "hr",    "img",
                                  "input", "link", "meta",  "param", "source", "track", "wbr"};
    return std::find(std::begin(kVoid), std::end(kVoid), t) != std::end(kVoid);
}

// Elements whose content is raw text up to the matching close tag.
inline bool is_raw_text_element(std::string_view t) {
    return t == "script" || t == "style" || t == "textarea" || t == "title" || t == "xmp";
}

class Scanner {
public:
    explicit Scanner(std::string_view html) : s_(html) {}

    Token next() {
        Token tok;
        if (pos_ >= s_.size()) return tok;  // eof

        // Raw-text mode: everything up to </name is one text token.
        if (!raw_until_.empty()) {
            size_t end = find_raw_end();
            tok.kind = Token::Kind::text;
            tok.text = s_.substr(pos_, end - pos_);
            raw_text_ = true;
            pos_ = end;
            return tok;
        }

        if (s_[pos_] != '<') {
            size_t end = s_.find('<', pos_);
            if (end == std::string_view::npos) end = s_.size();
            tok.kind = Token::Kind::text;
            tok.text = s_.substr(pos_, end - pos_);
            raw_text_ = false;
            pos_ = end;
            return tok;
        }

        // Comments, doctype, CDATA, processing instructions.
        if (match("<!--")) {
            size_t end = s_.find("-->", pos_ + 4);
            pos_ = end == std::string_view::npos ? s_.size() : end + 3;
            return next();
        }
        if (match("<![CDATA[")) {
            size_t end = s_.find("]]>", pos_ + 9);
            tok.kind = Token::Kind::text;
            size_t start = pos_ + 9;
            tok.text = s_.substr(start, (end == std::string_view::npos ? s_.size() : end) - start);
            raw_text_ = true;
            pos_ = end == std::string_view::npos ? s_.size() : end + 3;
            return tok;
        }
        if (pos_ + 1 < s_.size() && (s_[pos_ + 1] == '!' || s_[pos_ + 1] == '?')) {
            size_t end = s_.find('>', pos_);
            pos_ = end == std::string_view::npos ? s_.size() : end + 1;
            return next();
        }

        bool closing = pos_ + 1 < s_.size() && s_[pos_ + 1] == '/';
        size_t name_start = pos_ + (closing ? 2 : 1);
        if (name_start >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[name_start]))) {
            // A bare '<' that does not start a tag is literal text.
            tok.kind = Token::Kind::text;
            tok.text = s_.substr(pos_, 1);
            raw_text_ = false;
            ++pos_;
            return tok;
        }

        size_t i = name_start;
        while (i < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i])) || s_[i] == '-' ||
                                 s_[i] == ':'))
            ++i;
        tok.name = lower(s_.substr(name_start, i - name_start));
        tok.kind = closing ? Token::Kind::close : Token::Kind::open;

        if (closing) {
            size_t end = s_.find('>', i);
            pos_ = end == std::string_view::npos ? s_.size() : end + 1;
            return tok;
        }

        // Attributes.
        while (i < s_.size() && s_[i] != '>') {
            if (std::isspace(static_cast<unsigned char>(s_[i]))) {
                ++i;
                continue;
            }
            if (s_[i] == '/') {
                tok.self_closing = true;
                ++i;
                continue;
            }
            size_t as = i;
            while (i < s_.size() && s_[i] != '=' && s_[i] != '>' && s_[i] != '/' &&
                   !std::isspace(static_cast<unsigned char>(s_[i])))
                ++i;
            Attr a;
            a.name = lower(s_.substr(as, i - as));
            while (i < s_.size() && std::isspace(static_cast<unsigned char>(s_[i]))) ++i;
            if (i < s_.size() && s_[i] == '=') {
                ++i;
                while (i < s_.size() && std::isspace(static_cast<unsigned char>(s_[i]))) ++i;
                if (i < s_.size() && (s_[i] == '"' || s_[i] == '\'')) {
                    char q = s_[i++];
                    size_t vs = i;
                    while (i < s_.size() && s_[i] != q) ++i;
                    a.value = decode_entities(s_.substr(vs, i - vs));
                    if (i < s_.size()) ++i;
                } else {
                    size_t vs = i;
                    while (i < s_.size() && s_[i] != '>' &&
                           !std::isspace(static_cast<unsigned char>(s_[i])))
                        ++i;
                    a.value = decode_entities(s_.substr(vs, i - vs));
                }
            }
            if (!a.name.empty()) tok.attrs.push_back(std::move(a));
        }
        pos_ = i < s_.size() ? i + 1 : s_.size();

        if (!tok.self_closing && is_raw_text_element(tok.name)) raw_until_ = tok.name;
        return tok;
    }

    // True when the last text token came from a raw-text element or CDATA
    // section (entities must not be decoded there).
    bool last_text_was_raw() const { return raw_text_; }

private:
    bool match(std::string_view prefix) const {
        return s_.compare(pos_, prefix.size(), prefix) == 0;
    }

    size_t find_raw_end() {
        std::string needle = "</" + raw_until_;
        size_t i = pos_;
        while (true) {
            i = find_ci(i, needle);
            if (i == std::string_view::npos) {
                raw_until_.clear();
                return s_.size();
            }
            size_t after = i + needle.size();
            if (after >= s_.size() || s_[after] == '>' || std::isspace(static_cast<unsigned char>(s_[after]))) {
                raw_until_.clear();
                return i;  // the close tag itself is re-scanned next
            }
            i = after;
        }
    }

    size_t find_ci(size_t from, std::string_view needle) const {
        if (needle.empty() || s_.size() < needle.size()) return std::string_view::npos;
        for (size_t i = from; i + needle.size() <= s_.size(); ++i) {
            size_t k = 0;
            while (k < needle.size() &&
                   std::tolower(static_cast<unsigned char>(s_[i + k])) ==
                       std::tolower(static_cast<unsigned char>(needle[k])))
                ++k;
            if (k == needle.size()) return i;
        }
        return std::string_view::npos;
    }

    static std::string lower(std::string_view v) {
        std::string out(v);
        for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    }

    std::string_view s_;
    size_t pos_ = 0;
    std::string raw_until_;
    bool raw_text_ = false;
};

// All rendered text with tags removed; script/style/title content dropped.
// A cheap sample source for language identification, not an extractor.
inline std::string strip_tags(std::string_view html, size_t max_chars = SIZE_MAX) {
    Scanner sc(html);
    std::string out;
    bool pending = false;
    while (out.size() < max_chars) {
        Token t = sc.next();
        if (t.kind == Token::Kind::eof) break;
        if (t.kind != Token::Kind::text || sc.last_text_was_raw()) continue;
        std::string decoded = decode_entities(t.text);
        size_t i = 0;
        while (i < decoded.size()) {
            char32_t cp = unicode::decode_utf8(decoded, i);
            if (unicode::is_whitespace(cp)) {
                pending = !out.empty();
            } else {
                if (pending) out.push_back(' ');
                pending = false;
                unicode::append_utf8(out, cp);
            }
        }
    }
    return out;
}

}  // namespace corpusprep::html
