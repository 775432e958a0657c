#include "cdk/sampler.hpp"

#include <algorithm>
#include <map>

namespace cdk::sample {

using data::Puzzle;

Strategy strategy_from_name(const std::string& name) {
    if (name == "balanced") return Strategy::balanced;
    if (name == "random") return Strategy::random_uniform;
    if (name == "hard") return Strategy::hard;
    fail(Errc::ConfigParse, "unknown sampler strategy '" + name + "'");
}

const char* strategy_name(Strategy s) {
    switch (s) {
    case Strategy::balanced: return "balanced";
    case Strategy::random_uniform: return "random";
    case Strategy::hard: return "hard";
    }
    return "?";
}

namespace {

std::vector<const Puzzle*> eligible_of(const std::vector<Puzzle>& puzzles,
                                       const SamplerConfig& cfg) {
    std::vector<const Puzzle*> out;
    out.reserve(puzzles.size());
    for (const auto& p : puzzles)
        if (!cfg.exclude_ids.count(p.id)) out.push_back(&p);
    return out;
}

} // namespace

std::vector<Puzzle> sample_balanced(const std::vector<Puzzle>& puzzles, const SamplerConfig& cfg) {
    auto eligible = eligible_of(puzzles, cfg);
    if (eligible.empty()) fail(Errc::EmptyDataset, "no eligible puzzles to sample from");

    std::map<std::string, std::size_t> freq;
    for (const Puzzle* p : eligible)
        for (const auto& t : p->themes) ++freq[t];

    std::vector<std::pair<std::string, std::size_t>> themes(freq.begin(), freq.end());
    std::sort(themes.begin(), themes.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    if (themes.size() > static_cast<std::size_t>(cfg.rare_theme_count))
        themes.resize(static_cast<std::size_t>(cfg.rare_theme_count));

    Rng rng(cfg.seed);
    std::unordered_set<std::string> selected;
    std::vector<Puzzle> out;
    for (const auto& [theme, count] : themes) {
        (void)count;
        std::vector<const Puzzle*> candidates;
        for (const Puzzle* p : eligible)
            if (!selected.count(p->id) && p->has_theme(theme)) candidates.push_back(p);
        std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(cfg.per_theme_cap),
                                                 candidates.size());
        for (std::size_t idx : draw_without_replacement(rng, candidates.size(), want)) {
            out.push_back(*candidates[idx]);
            selected.insert(candidates[idx]->id);
        }
    }
    return out;
}

std::vector<Puzzle> sample_random(const std::vector<Puzzle>& puzzles, const SamplerConfig& cfg) {
    auto eligible = eligible_of(puzzles, cfg);
    auto n = static_cast<std::size_t>(cfg.target_size);
    if (n > eligible.size())
        fail(Errc::InsufficientPopulation, "need " + std::to_string(n) + " puzzles, only " +
                                               std::to_string(eligible.size()) + " eligible");
    Rng rng(cfg.seed);
    std::vector<Puzzle> out;
    out.reserve(n);
    for (std::size_t idx : draw_without_replacement(rng, eligible.size(), n))
        out.push_back(*eligible[idx]);
    return out;
}

std::vector<Puzzle> sample_hard(const std::vector<Puzzle>& puzzles, const SamplerConfig& cfg) {
    auto eligible = eligible_of(puzzles, cfg);
    auto n = static_cast<std::size_t>(cfg.target_size);
    if (n > eligible.size())
        fail(Errc::InsufficientPopulation, "need " + std::to_string(n) + " puzzles, only " +
                                               std::to_string(eligible.size()) + " eligible");
    std::sort(eligible.begin(), eligible.end(), [](const Puzzle* a, const Puzzle* b) {
        if (a->rating != b->rating) return a->rating > b->rating;
        return a->id < b->id;
    });
    std::vector<Puzzle> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(*eligible[i]);
    return out;
}

std::vector<Puzzle> run_sampler(const std::vector<Puzzle>& puzzles, const SamplerConfig& cfg) {
    switch (cfg.strategy) {
    case Strategy::balanced: return sample_balanced(puzzles, cfg);
    case Strategy::random_uniform: return sample_random(puzzles, cfg);
    case Strategy::hard: return sample_hard(puzzles, cfg);
    }
    fail(Errc::ConfigParse, "bad sampler strategy");
}

} // namespace cdk::sample
