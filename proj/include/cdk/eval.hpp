#pragma once

#include "cdk/puzzle.hpp"
#include "cdk/reward.hpp"
#include "cdk/teacher.hpp"
#include "cdk/util.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace cdk::eval {

// The twenty theme-split labels of the evaluation protocol.
const std::vector<std::string>& default_theme_labels();

struct LevelBand {
    std::string label;
    int min_rating; // inclusive
    int max_rating; // exclusive, 0 = unbounded
};

// Beginner <1100, Intermediate 1100-1699, Advanced 1700-2299, Expert >=2300.
const std::vector<LevelBand>& default_level_bands();

struct EvalConfig {
    std::vector<std::string> theme_labels = default_theme_labels();
    int per_theme = 25;
    std::vector<LevelBand> level_bands = default_level_bands();
    int per_level = 100;
    std::uint64_t seed = 0;
};

struct EvalCell {
    std::string label;
    std::vector<data::Puzzle> puzzles;
};

struct EvalSplit {
    std::string kind; // "theme" or "level"
    std::vector<EvalCell> cells;
};

// Seeded uniform sampling per cell, without replacement, ids unique across
// both splits and disjoint from train_ids. Throws InsufficientCell.
std::pair<EvalSplit, EvalSplit> build_test_splits(const std::vector<data::Puzzle>& puzzles,
                                                  const std::unordered_set<std::string>& train_ids,
                                                  const EvalConfig& cfg);

struct ItemRecord {
    std::string puzzle_id;
    std::string split;      // "theme" / "level"
    std::string cell;
    std::string expected;   // UCI ground truth
    std::string completion; // raw model output, persisted before scoring
    std::string predicted;  // extracted answer, "" when extraction failed
    double reward = 0.0;
    std::string reason;
    std::optional<long> completion_tokens;
    double latency_ms = 0.0;
    bool error = false; // transport/provider failure after retries
    std::string error_message;
};

struct CellScore {
    std::string label;
    int items = 0;
    double accuracy = 0.0; // percent
};

struct EvalReport {
    std::string model;
    std::vector<CellScore> level_cells;
    std::vector<CellScore> theme_cells;
    double theme_split_accuracy = 0.0;       // percent over all theme items
    double avg_accuracy = 0.0;               // percent, unweighted over all items
    std::optional<double> avg_tokens;        // mean provider-reported completion tokens
    std::vector<ItemRecord> items;
    int errors = 0;
    std::string config_hash;
    std::string toolkit_version;
};

// One completion per puzzle at temperature 0 (pass@1), scored with
// reward::score at the given eta. Failed items score 0 and are flagged;
// more than 20% failures aborts the run.
std::vector<ItemRecord> run_queries(const llm::TeacherConfig& endpoint,
                                    const std::vector<const EvalSplit*>& splits,
                                    const reward::RewardConfig& reward_cfg);

// Deterministic aggregation; rescoring persisted items reproduces the report.
EvalReport build_report(const std::string& model, const EvalConfig& cfg,
                        std::vector<ItemRecord> items);

std::string render_report_text(const EvalReport& report);
util::ojson render_report_json(const EvalReport& report);

util::ojson item_to_json(const ItemRecord& item);
ItemRecord item_from_json(const util::ojson& j);

// Re-derives predicted/reward/reason from the stored completion.
void rescore_items(std::vector<ItemRecord>& items, const reward::RewardConfig& reward_cfg);

} // namespace cdk::eval
