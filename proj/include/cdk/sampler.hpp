#pragma once

#include "cdk/puzzle.hpp"
#include "cdk/rng.hpp"

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace cdk::sample {

enum class Strategy { balanced, random_uniform, hard };

Strategy strategy_from_name(const std::string& name); // throws ConfigParse
const char* strategy_name(Strategy s);

struct SamplerConfig {
    Strategy strategy = Strategy::balanced;
    int rare_theme_count = 50; // K: rare themes to balance
    int per_theme_cap = 800;   // M: max samples per theme
    int target_size = 0;       // n: random / hard only
    std::uint64_t seed = 0;
    std::unordered_set<std::string> exclude_ids;
};

// Theme-balanced sampling:
//   1. eligible = input order, minus exclude_ids
//   2. f(t) = |{p in eligible : t in themes(p)}|
//   3. rare = first K themes ordered by (f ascending, name ascending)
//   4. for each rare theme in that order: candidates = eligible puzzles
//      carrying the theme and not yet selected, in input order; draw
//      min(M, |candidates|) without replacement from one seeded stream
//      (see rng.hpp for the exact procedure); append in draw order
// No puzzle id appears twice; exclude_ids never appear.
std::vector<data::Puzzle> sample_balanced(const std::vector<data::Puzzle>& puzzles,
                                          const SamplerConfig& cfg);

// Uniform without replacement over the eligible set, output in draw order.
std::vector<data::Puzzle> sample_random(const std::vector<data::Puzzle>& puzzles,
                                        const SamplerConfig& cfg);

// The n highest-rated eligible puzzles; ties broken by id ascending.
std::vector<data::Puzzle> sample_hard(const std::vector<data::Puzzle>& puzzles,
                                      const SamplerConfig& cfg);

std::vector<data::Puzzle> run_sampler(const std::vector<data::Puzzle>& puzzles,
                                      const SamplerConfig& cfg);

} // namespace cdk::sample
