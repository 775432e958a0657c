#pragma once

#include "cdk/engine.hpp"
#include "cdk/puzzle.hpp"
#include "cdk/util.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdk::trace {

// Last line-anchored "FINAL_ANSWER: <token>" wins; the token is stripped of
// surrounding punctuation, lowercased, and parsed as UCI. Throws NoMarker /
// UnparseableMove.
chess::Move extract_final_answer(std::string_view text);

// Sentence counting heuristic (the length band needs a fixed rule):
//   - terminators are '.', '!', '?' followed by whitespace or end of text;
//   - a '.' directly after a digit does not terminate (move numbers "1.",
//     SAN such as "Nf3." end in rank digits);
//   - a run of terminators counts once;
//   - FINAL_ANSWER lines are not prose and are excluded.
int count_sentences(std::string_view text);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
    bool mandatory = true;
};

struct ValidationReport {
    std::string puzzle_id;
    bool accepted = false;
    std::vector<CheckResult> checks;
    std::optional<chess::Move> extracted_answer;
};

struct ValidatorConfig {
    int min_sentences = 4;
    int max_sentences = 10;
    int mate_in_one_min_sentences = 2; // mateIn1 traces may be terse
    bool check_grounding = true;       // soft check, never rejects
};

// Mandatory checks: answer_match, sentence_count, forbidden_phrases,
// no_marker_duplication. Soft check: move_grounding (every UCI-shaped token
// must be legal somewhere along the master-line replay).
ValidationReport validate_trace(std::string_view trace, const data::Puzzle& puzzle,
                                const chess::Move& expected,
                                const engine::Analysis* analysis = nullptr,
                                const ValidatorConfig& cfg = {});

util::ojson report_to_json(const ValidationReport& report);

} // namespace cdk::trace
