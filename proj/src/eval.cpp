#include "cdk/eval.hpp"
#include "cdk/errors.hpp"
#include "cdk/prompt.hpp"
#include "cdk/rng.hpp"
#include "cdk/validate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace cdk::eval {

using data::Puzzle;

const std::vector<std::string>& default_theme_labels() {
    static const std::vector<std::string> labels = {
        "advancedPawn", "attraction",  "backRankMate", "capturingDefender", "defensiveMove",
        "deflection",   "discoveredAttack", "doubleCheck", "fork",          "hangingPiece",
        "mateIn1",      "mateIn2",     "pin",          "promotion",         "queensideAttack",
        "sacrifice",    "skewer",      "trappedPiece", "xRayAttack",        "zugzwang",
    };
    return labels;
}

const std::vector<LevelBand>& default_level_bands() {
    static const std::vector<LevelBand> bands = {
        {"Beginner", 0, 1100},
        {"Intermediate", 1100, 1700},
        {"Advanced", 1700, 2300},
        {"Expert", 2300, 0},
    };
    return bands;
}

std::pair<EvalSplit, EvalSplit> build_test_splits(const std::vector<Puzzle>& puzzles,
                                                  const std::unordered_set<std::string>& train_ids,
                                                  const EvalConfig& cfg) {
    sample::Rng rng(cfg.seed);
    std::unordered_set<std::string> taken;

    auto draw_cell = [&](const std::string& label, auto&& predicate, int want) {
        std::vector<const Puzzle*> candidates;
        for (const auto& p : puzzles) {
            if (train_ids.count(p.id) || taken.count(p.id)) continue;
            if (predicate(p)) candidates.push_back(&p);
        }
        if (candidates.size() < static_cast<size_t>(want))
            fail(Errc::InsufficientCell, "cell '" + label + "' needs " + std::to_string(want) +
                                             " puzzles, only " +
                                             std::to_string(candidates.size()) + " available");
        EvalCell cell{label, {}};
        for (size_t idx :
             sample::draw_without_replacement(rng, candidates.size(), static_cast<size_t>(want))) {
            cell.puzzles.push_back(*candidates[idx]);
            taken.insert(candidates[idx]->id);
        }
        return cell;
    };

    EvalSplit themes{"theme", {}};
    for (const auto& label : cfg.theme_labels)
        themes.cells.push_back(draw_cell(
            label, [&](const Puzzle& p) { return p.has_theme(label); }, cfg.per_theme));

    EvalSplit levels{"level", {}};
    for (const auto& band : cfg.level_bands)
        levels.cells.push_back(draw_cell(
            band.label,
            [&](const Puzzle& p) {
                return p.rating >= band.min_rating &&
                       (band.max_rating == 0 || p.rating < band.max_rating);
            },
            cfg.per_level));

    return {std::move(themes), std::move(levels)};
}

std::vector<ItemRecord> run_queries(const llm::TeacherConfig& endpoint,
                                    const std::vector<const EvalSplit*>& splits,
                                    const reward::RewardConfig& reward_cfg) {
    struct Job {
        const Puzzle* puzzle;
        std::string split;
        std::string cell;
    };
    std::vector<Job> jobs;
    for (const EvalSplit* split : splits)
        for (const auto& cell : split->cells)
            for (const auto& p : cell.puzzles) jobs.push_back(Job{&p, split->kind, cell.label});

    llm::TeacherConfig cfg = endpoint;
    cfg.temperature = 0.0;      // pass@1, single greedy sample
    cfg.retry.max_attempts = 3; // transport retries only; wrong answers are final

    std::vector<ItemRecord> items(jobs.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            ItemRecord& item = items[i];
            item.puzzle_id = job.puzzle->id;
            item.split = job.split;
            item.cell = job.cell;
            item.expected = job.puzzle->solution.uci();
            std::string prompt = prompt::build_solver_prompt(*job.puzzle);
            auto t0 = std::chrono::steady_clock::now();
            try {
                llm::Completion c = llm::complete(cfg, prompt);
                item.completion = c.text;
                item.completion_tokens = c.usage.completion_tokens;
            } catch (const Error& e) {
                item.error = true;
                item.error_message = e.what();
            }
            item.latency_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
        }
    };
    size_t n_threads = std::min<size_t>(static_cast<size_t>(std::max(cfg.max_concurrency, 1)),
                                        jobs.size());
    std::vector<std::thread> threads;
    for (size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    size_t errors = 0;
    for (const auto& item : items) errors += item.error;
    if (!items.empty() && errors * 5 > items.size())
        fail(Errc::AbortedRun, std::to_string(errors) + " of " + std::to_string(items.size()) +
                                   " items failed (>20%)");

    rescore_items(items, reward_cfg);
    return items;
}

void rescore_items(std::vector<ItemRecord>& items, const reward::RewardConfig& reward_cfg) {
    for (auto& item : items) {
        reward::RewardOutcome outcome =
            reward::score(item.completion, chess::Move::parse(item.expected), reward_cfg);
        item.reward = item.error ? 0.0 : outcome.reward;
        item.reason = reward::reason_name(outcome.reason);
        item.predicted.clear();
        try {
            item.predicted = trace::extract_final_answer(item.completion).uci();
        } catch (const Error&) {
        }
    }
}

EvalReport build_report(const std::string& model, const EvalConfig& cfg,
                        std::vector<ItemRecord> items) {
    EvalReport report;
    report.model = model;
    report.items = std::move(items);

    auto cell_score = [&](const std::string& split, const std::string& label) {
        CellScore score{label, 0, 0.0};
        double sum = 0.0;
        for (const auto& item : report.items) {
            if (item.split != split || item.cell != label) continue;
            ++score.items;
            sum += item.reward;
        }
        if (score.items) score.accuracy = 100.0 * sum / score.items;
        return score;
    };

    for (const auto& band : cfg.level_bands) report.level_cells.push_back(cell_score("level", band.label));
    for (const auto& label : cfg.theme_labels) report.theme_cells.push_back(cell_score("theme", label));

    double total = 0.0;
    double theme_total = 0.0;
    size_t theme_items = 0;
    long long token_sum = 0;
    size_t token_items = 0;
    for (const auto& item : report.items) {
        total += item.reward;
        report.errors += item.error;
        if (item.split == "theme") {
            theme_total += item.reward;
            ++theme_items;
        }
        if (item.completion_tokens) {
            token_sum += *item.completion_tokens;
            ++token_items;
        }
    }
    if (!report.items.empty()) report.avg_accuracy = 100.0 * total / report.items.size();
    if (theme_items) report.theme_split_accuracy = 100.0 * theme_total / theme_items;
    if (token_items)
        report.avg_tokens = static_cast<double>(token_sum) / static_cast<double>(token_items);
    return report;
}

namespace {

std::string fmt1(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", value);
    return buf;
}

void render_row(std::ostringstream& out, const std::string& head, size_t head_width,
                const std::vector<std::pair<std::string, std::string>>& cols) {
    out << head << std::string(head_width - head.size(), ' ');
    for (const auto& [label, value] : cols) {
        size_t w = std::max(label.size(), value.size());
        out << "  " << std::string(w - value.size(), ' ') << value;
    }
    out << "\n";
}

void render_header(std::ostringstream& out, const std::string& head, size_t head_width,
                   const std::vector<std::pair<std::string, std::string>>& cols) {
    out << head << std::string(head_width - head.size(), ' ');
    for (const auto& [label, value] : cols) {
        size_t w = std::max(label.size(), value.size());
        out << "  " << std::string(w - label.size(), ' ') << label;
    }
    out << "\n";
}

} // namespace

std::string render_report_text(const EvalReport& report) {
    std::ostringstream out;
    size_t head_width = std::max<size_t>(report.model.size(), 5);

    std::vector<std::pair<std::string, std::string>> difficulty;
    for (const auto& cell : report.level_cells) difficulty.emplace_back(cell.label, fmt1(cell.accuracy));
    difficulty.emplace_back("Theme-Split", fmt1(report.theme_split_accuracy));
    difficulty.emplace_back("Avg Acc", fmt1(report.avg_accuracy));
    difficulty.emplace_back("Avg Tokens",
                            report.avg_tokens ? std::to_string(std::llround(*report.avg_tokens))
                                              : std::string("-"));

    out << "Performance by difficulty level\n";
    render_header(out, "Model", head_width, difficulty);
    render_row(out, report.model, head_width, difficulty);

    std::vector<std::pair<std::string, std::string>> themes;
    for (const auto& cell : report.theme_cells) themes.emplace_back(cell.label, fmt1(cell.accuracy));
    out << "\nPerformance by tactic theme\n";
    render_header(out, "Model", head_width, themes);
    render_row(out, report.model, head_width, themes);

    out << "\nItems: " << report.items.size() << "  Errors: " << report.errors << "\n";
    out << "Avg Acc = mean item reward x 100 over all " << report.items.size()
        << " items (unweighted); Theme-Split = the same mean over theme-split items.\n";
    out << "Avg Tokens = mean provider-reported completion tokens; '-' when the provider "
           "reports none.\n";
    if (!report.config_hash.empty())
        out << "config_hash=" << report.config_hash << " version=" << report.toolkit_version
            << "\n";
    return out.str();
}

util::ojson render_report_json(const EvalReport& report) {
    util::ojson j;
    j["model"] = report.model;
    j["toolkit_version"] = report.toolkit_version;
    j["config_hash"] = report.config_hash;
    util::ojson levels = util::ojson::object();
    for (const auto& cell : report.level_cells) levels[cell.label] = cell.accuracy;
    j["levels"] = std::move(levels);
    util::ojson themes = util::ojson::object();
    for (const auto& cell : report.theme_cells) themes[cell.label] = cell.accuracy;
    j["themes"] = std::move(themes);
    j["theme_split_accuracy"] = report.theme_split_accuracy;
    j["avg_accuracy"] = report.avg_accuracy;
    j["avg_tokens"] = report.avg_tokens ? util::ojson(*report.avg_tokens) : util::ojson(nullptr);
    j["items"] = report.items.size();
    j["errors"] = report.errors;
    j["avg_accuracy_formula"] = "mean item reward x 100 over all items, unweighted";
    return j;
}

util::ojson item_to_json(const ItemRecord& item) {
    util::ojson j;
    j["puzzle_id"] = item.puzzle_id;
    j["split"] = item.split;
    j["cell"] = item.cell;
    j["expected"] = item.expected;
    j["completion"] = item.completion;
    j["predicted"] = item.predicted;
    j["reward"] = item.reward;
    j["reason"] = item.reason;
    j["completion_tokens"] =
        item.completion_tokens ? util::ojson(*item.completion_tokens) : util::ojson(nullptr);
    j["latency_ms"] = item.latency_ms;
    j["error"] = item.error;
    j["error_message"] = item.error_message;
    return j;
}

ItemRecord item_from_json(const util::ojson& j) {
    ItemRecord item;
    item.puzzle_id = j.at("puzzle_id").get<std::string>();
    item.split = j.at("split").get<std::string>();
    item.cell = j.at("cell").get<std::string>();
    item.expected = j.at("expected").get<std::string>();
    item.completion = j.at("completion").get<std::string>();
    item.predicted = j.value("predicted", "");
    item.reward = j.at("reward").get<double>();
    item.reason = j.value("reason", "");
    if (j.contains("completion_tokens") && j["completion_tokens"].is_number())
        item.completion_tokens = j["completion_tokens"].get<long>();
    item.latency_ms = j.value("latency_ms", 0.0);
    item.error = j.value("error", false);
    item.error_message = j.value("error_message", "");
    return item;
}

} // namespace cdk::eval
