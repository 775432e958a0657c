#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cdk/sampler.hpp"
#include "sampler_reference.hpp"
#include "test_support.hpp"

#include <random>
#include <set>

using namespace cdk;
using sample::SamplerConfig;
using sample::Strategy;

namespace {

std::vector<data::Puzzle> abc_dataset() {
    return {
        testsup::make_puzzle("p1", {"A"}, 1000),
        testsup::make_puzzle("p2", {"A", "B"}, 1200),
        testsup::make_puzzle("p3", {"A"}, 1400),
    };
}

std::vector<std::string> ids_of(const std::vector<data::Puzzle>& puzzles) {
    std::vector<std::string> out;
    for (const auto& p : puzzles) out.push_back(p.id);
    return out;
}

} // namespace

TEST_CASE("balanced sampling hand traces") {
    SamplerConfig cfg;
    cfg.strategy = Strategy::balanced;
    cfg.seed = 7;

    // K=1: rare theme is B (f=1 < f(A)=3); only p2 qualifies
    cfg.rare_theme_count = 1;
    cfg.per_theme_cap = 2;
    CHECK(ids_of(sample::sample_balanced(abc_dataset(), cfg)) == std::vector<std::string>{"p2"});

    // K=2: B first, then A contributes 2 of {p1, p3}; all three end up selected
    cfg.rare_theme_count = 2;
    auto picked = ids_of(sample::sample_balanced(abc_dataset(), cfg));
    CHECK(picked.size() == 3);
    CHECK(picked[0] == "p2");
    CHECK(std::set<std::string>(picked.begin(), picked.end()) ==
          std::set<std::string>{"p1", "p2", "p3"});
}

TEST_CASE("balanced respects exclude_ids and never duplicates") {
    SamplerConfig cfg;
    cfg.strategy = Strategy::balanced;
    cfg.rare_theme_count = 2;
    cfg.per_theme_cap = 5;
    cfg.exclude_ids = {"p2"};
    auto picked = ids_of(sample::sample_balanced(abc_dataset(), cfg));
    std::set<std::string> uniq(picked.begin(), picked.end());
    CHECK(uniq.size() == picked.size());
    CHECK(!uniq.count("p2"));

    cfg.exclude_ids = {"p1", "p2", "p3"};
    CHECK_THROWS_AS(sample::sample_balanced(abc_dataset(), cfg), Error);
}

TEST_CASE("balanced coverage: every rare theme with candidates contributes") {
    std::vector<data::Puzzle> puzzles;
    std::mt19937_64 rng(99);
    std::vector<std::string> names = {"a", "b", "c", "d", "e", "f"};
    for (int i = 0; i < 200; ++i) {
        std::vector<std::string> themes = {names[rng() % names.size()]};
        if (rng() % 2) themes.push_back(names[rng() % names.size()]);
        puzzles.push_back(testsup::make_puzzle("p" + std::to_string(i), themes, 1000 + i));
    }
    SamplerConfig cfg;
    cfg.strategy = Strategy::balanced;
    cfg.rare_theme_count = 6;
    cfg.per_theme_cap = 3;
    cfg.seed = 5;
    auto picked = sample::sample_balanced(puzzles, cfg);
    for (const auto& name : names) {
        bool covered = false;
        for (const auto& p : picked) covered |= p.has_theme(name);
        CHECK_MESSAGE(covered, name);
    }
}

TEST_CASE("balanced matches the straight-line reference on random datasets") {
    std::mt19937_64 meta(123);
    for (int trial = 0; trial < 25; ++trial) {
        size_t n = 20 + meta() % 300;
        int n_themes = 3 + static_cast<int>(meta() % 12);
        std::vector<data::Puzzle> puzzles;
        for (size_t i = 0; i < n; ++i) {
            std::vector<std::string> themes;
            int k = 1 + static_cast<int>(meta() % 3);
            for (int t = 0; t < k; ++t)
                themes.push_back("t" + std::to_string(meta() % n_themes));
            puzzles.push_back(
                testsup::make_puzzle("z" + std::to_string(i), themes,
                                     600 + static_cast<int>(meta() % 2000)));
        }
        SamplerConfig cfg;
        cfg.strategy = Strategy::balanced;
        cfg.rare_theme_count = 1 + static_cast<int>(meta() % n_themes);
        cfg.per_theme_cap = 1 + static_cast<int>(meta() % 40);
        cfg.seed = meta();
        auto ours = ids_of(sample::sample_balanced(puzzles, cfg));
        auto reference = sampler_ref::balanced(puzzles, cfg.rare_theme_count, cfg.per_theme_cap,
                                               cfg.seed);
        REQUIRE(ours == reference);
    }
}

TEST_CASE("random sampling") {
    SamplerConfig cfg;
    cfg.strategy = Strategy::random_uniform;
    cfg.seed = 42;

    std::vector<data::Puzzle> ten;
    for (int i = 0; i < 10; ++i)
        ten.push_back(testsup::make_puzzle("r" + std::to_string(i), {"x"}, 1000 + i));

    cfg.target_size = 10;
    auto all = ids_of(sample::sample_random(ten, cfg));
    CHECK(std::set<std::string>(all.begin(), all.end()).size() == 10);
    CHECK(all != ids_of(ten)); // draw order, not input order

    cfg.target_size = 3;
    CHECK(ids_of(sample::sample_random(ten, cfg)) == ids_of(sample::sample_random(ten, cfg)));

    cfg.exclude_ids = {"r0", "r1", "r2", "r3", "r4", "r5", "r6", "r7"};
    cfg.target_size = 3;
    CHECK_THROWS_AS(sample::sample_random(ten, cfg), Error);
    cfg.target_size = 2;
    auto rest = ids_of(sample::sample_random(ten, cfg));
    CHECK(std::set<std::string>(rest.begin(), rest.end()) == std::set<std::string>{"r8", "r9"});
}

TEST_CASE("hard sampling takes the highest ratings, ties by id") {
    std::vector<data::Puzzle> puzzles = {
        testsup::make_puzzle("m", {"x"}, 800),
        testsup::make_puzzle("n", {"x"}, 1500),
        testsup::make_puzzle("o", {"x"}, 2400),
    };
    SamplerConfig cfg;
    cfg.strategy = Strategy::hard;
    cfg.target_size = 1;
    CHECK(ids_of(sample::sample_hard(puzzles, cfg)) == std::vector<std::string>{"o"});

    cfg.target_size = 3;
    CHECK(ids_of(sample::sample_hard(puzzles, cfg)) == std::vector<std::string>{"o", "n", "m"});

    std::vector<data::Puzzle> tied = {
        testsup::make_puzzle("b", {"x"}, 2000),
        testsup::make_puzzle("a", {"x"}, 2000),
    };
    cfg.target_size = 1;
    CHECK(ids_of(sample::sample_hard(tied, cfg)) == std::vector<std::string>{"a"});
}

TEST_CASE("determinism across strategies") {
    auto puzzles = abc_dataset();
    for (Strategy s : {Strategy::balanced, Strategy::random_uniform, Strategy::hard}) {
        SamplerConfig cfg;
        cfg.strategy = s;
        cfg.rare_theme_count = 2;
        cfg.per_theme_cap = 2;
        cfg.target_size = 2;
        cfg.seed = 11;
        CHECK(ids_of(sample::run_sampler(puzzles, cfg)) ==
              ids_of(sample::run_sampler(puzzles, cfg)));
    }
}
