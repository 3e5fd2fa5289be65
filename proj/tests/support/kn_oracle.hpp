#pragma once

// Brute-force modified Kneser-Ney reference, computed directly from raw
// n-gram counts with map-of-vector tables and naive recursion. Kept fully
// independent of the library implementation; tests compare the two.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace kn_oracle {

using Gram = std::vector<std::string>;
using Counts = std::map<Gram, long long>;

struct Discounts {
    double d1 = 0, d2 = 0, d3 = 0;
    bool fallback = false;
    double of(long long c) const {
        if (c <= 0) return 0;
        if (c == 1) return d1;
        if (c == 2) return d2;
        return d3;
    }
};

struct Oracle {
    int order;
    std::vector<Counts> raw;       // raw[k] holds (k+1)-grams, k = 0..order-1
    std::vector<Counts> adjusted;  // same layout, KN-adjusted counts
    std::vector<Discounts> disc;   // per order
    long long vocab_size = 0;      // predictable types incl <unk>, excl <s>

    static Oracle build(const std::vector<std::vector<std::string>>& sentences, int order) {
        Oracle o;
        o.order = order;
        o.raw.resize(order);
        for (const auto& sent : sentences) {
            Gram padded;
            padded.push_back("<s>");
            for (const auto& t : sent)
                padded.push_back(t == "<s>" || t == "</s>" || t == "<unk>" ? "<unk>" : t);
            padded.push_back("</s>");
            for (int k = 1; k <= order; ++k)
                for (size_t i = 0; i + k <= padded.size(); ++i)
                    o.raw[k - 1][Gram(padded.begin() + i, padded.begin() + i + k)]++;
        }

        o.adjusted.resize(order);
        o.adjusted[order - 1] = o.raw[order - 1];
        for (int k = order - 1; k >= 1; --k) {
            Counts cont;
            for (const auto& [gram, c] : o.raw[k])
                cont[Gram(gram.begin() + 1, gram.end())]++;
            for (const auto& [gram, c] : o.raw[k - 1]) {
                if (gram.front() == "<s>")
                    o.adjusted[k - 1][gram] = c;
                else
                    o.adjusted[k - 1][gram] = cont.count(gram) ? cont[gram] : 0;
            }
        }
        o.adjusted[0].erase(Gram{"<s>"});

        for (int k = 0; k < order; ++k) o.disc.push_back(estimate_discounts(o.adjusted[k]));
        // Predictable types plus <unk> (which may itself have been observed).
        o.vocab_size = static_cast<long long>(o.adjusted[0].size()) +
                       (o.adjusted[0].count(Gram{"<unk>"}) ? 0 : 1);
        return o;
    }

    static Discounts estimate_discounts(const Counts& table) {
        long long n1 = 0, n2 = 0, n3 = 0, n4 = 0;
        for (const auto& [g, c] : table) {
            if (c == 1) ++n1;
            else if (c == 2) ++n2;
            else if (c == 3) ++n3;
            else if (c == 4) ++n4;
        }
        Discounts d;
        if (n1 == 0 || n2 == 0) {
            d.d1 = d.d2 = d.d3 = 0.75;
            d.fallback = true;
            return d;
        }
        double y = static_cast<double>(n1) / (n1 + 2.0 * n2);
        d.d1 = 1.0 - 2.0 * y * n2 / n1;
        d.d2 = n2 > 0 ? 2.0 - 3.0 * y * n3 / n2 : 0.0;
        d.d3 = n3 > 0 ? 3.0 - 4.0 * y * n4 / n3 : d.d2;
        if (d.d1 < 0 || d.d2 < 0 || d.d3 < 0 || d.d1 > 1 || d.d2 > 2 || d.d3 > 3) {
            d.d1 = d.d2 = d.d3 = 0.75;
            d.fallback = true;
        }
        return d;
    }

    long long adj(int k, const Gram& g) const {
        auto it = adjusted[k - 1].find(g);
        return it == adjusted[k - 1].end() ? 0 : it->second;
    }

    // Sum of adjusted counts extending ctx by one token.
    long long context_total(const Gram& ctx) const {
        int k = static_cast<int>(ctx.size()) + 1;
        long long total = 0;
        for (const auto& [g, c] : adjusted[k - 1])
            if (std::equal(ctx.begin(), ctx.end(), g.begin())) total += c;
        return total;
    }

    double gamma(const Gram& ctx) const {
        int k = static_cast<int>(ctx.size()) + 1;
        long long total = 0, b1 = 0, b2 = 0, b3 = 0;
        for (const auto& [g, c] : adjusted[k - 1]) {
            if (!std::equal(ctx.begin(), ctx.end(), g.begin())) continue;
            total += c;
            if (c == 1) ++b1;
            else if (c == 2) ++b2;
            else ++b3;
        }
        if (total == 0) return -1;  // unseen context
        const Discounts& d = disc[k - 1];
        return (d.d1 * b1 + d.d2 * b2 + d.d3 * b3) / static_cast<double>(total);
    }

    // Interpolated conditional P(w | ctx); ctx length < order.
    double prob(const Gram& ctx, const std::string& w) const {
        if (ctx.empty()) {
            long long total = 0, b1 = 0, b2 = 0, b3 = 0;
            for (const auto& [g, c] : adjusted[0]) {
                total += c;
                if (c == 1) ++b1;
                else if (c == 2) ++b2;
                else ++b3;
            }
            const Discounts& d = disc[0];
            double g1 = (d.d1 * b1 + d.d2 * b2 + d.d3 * b3) / static_cast<double>(total);
            long long a = adj(1, Gram{w});
            return std::max(static_cast<double>(a) - d.of(a), 0.0) / static_cast<double>(total) +
                   g1 / static_cast<double>(vocab_size);
        }
        Gram shorter(ctx.begin() + 1, ctx.end());
        long long total = context_total(ctx);
        if (total == 0) return prob(shorter, w);
        int k = static_cast<int>(ctx.size()) + 1;
        Gram full = ctx;
        full.push_back(w);
        long long a = adj(k, full);
        const Discounts& d = disc[k - 1];
        return std::max(static_cast<double>(a) - d.of(a), 0.0) / static_cast<double>(total) +
               gamma(ctx) * prob(shorter, w);
    }

    // Maps tokens outside the observed vocabulary (or reserved markers) to <unk>.
    std::string normalize_token(const std::string& w) const {
        if (w == "<s>" || w == "</s>" || w == "<unk>") return "<unk>";
        return adjusted[0].count(Gram{w}) ? w : "<unk>";
    }

    double sentence_log10_prob(const std::vector<std::string>& tokens) const {
        Gram ctx{"<s>"};
        double total = 0;
        auto step = [&](const std::string& w) {
            Gram use = ctx;
            while (static_cast<int>(use.size()) > order - 1) use.erase(use.begin());
            total += std::log10(prob(use, w));
            ctx.push_back(w);
        };
        for (const auto& t : tokens) step(normalize_token(t));
        step("</s>");
        return total;
    }
};

}  // namespace kn_oracle
