#pragma once

// Straight-line reference of the theme-balanced sampling algorithm, written
// against the documented procedure (one mt19937_64 stream, rejection-sampled
// bounded draws, partial Fisher-Yates per theme) independently of the
// library's sampler. Test-only.

#include "cdk/puzzle.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace sampler_ref {

inline std::uint64_t draw_below(std::mt19937_64& gen, std::uint64_t n) {
    std::uint64_t rem = (UINT64_MAX % n + 1) % n;
    std::uint64_t x = gen();
    while (rem != 0 && x > UINT64_MAX - rem) x = gen();
    return x % n;
}

inline std::vector<std::string> balanced(const std::vector<cdk::data::Puzzle>& dataset, int K,
                                         int M, std::uint64_t seed,
                                         const std::set<std::string>& exclude = {}) {
    std::vector<const cdk::data::Puzzle*> eligible;
    for (const auto& p : dataset)
        if (!exclude.count(p.id)) eligible.push_back(&p);

    // f(t) over the eligible set
    std::map<std::string, int> f;
    for (const auto* p : eligible)
        for (const auto& t : p->themes) f[t] += 1;

    // K rarest themes, ties by name; boundary ties keep smaller names
    std::vector<std::pair<int, std::string>> order;
    for (const auto& [t, c] : f) order.push_back({c, t});
    std::sort(order.begin(), order.end());
    if (static_cast<int>(order.size()) > K) order.resize(static_cast<size_t>(K));

    std::mt19937_64 gen(seed);
    std::set<std::string> selected;
    std::vector<std::string> out;
    for (const auto& [count, theme] : order) {
        (void)count;
        std::vector<const cdk::data::Puzzle*> candidates;
        for (const auto* p : eligible) {
            if (selected.count(p->id)) continue;
            if (std::find(p->themes.begin(), p->themes.end(), theme) != p->themes.end())
                candidates.push_back(p);
        }
        size_t want = std::min<size_t>(static_cast<size_t>(M), candidates.size());
        std::vector<size_t> idx(candidates.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (size_t i = 0; i < want; ++i) {
            size_t j = i + static_cast<size_t>(draw_below(gen, idx.size() - i));
            std::swap(idx[i], idx[j]);
            out.push_back(candidates[idx[i]]->id);
            selected.insert(candidates[idx[i]]->id);
        }
    }
    return out;
}

} // namespace sampler_ref
