#pragma once

#include "cdk/engine.hpp"
#include "cdk/puzzle.hpp"

#include <string>

namespace cdk::prompt {

enum class PvMode { best_move, multi_pv, omitted };

PvMode pv_mode_from_name(const std::string& name); // throws ConfigParse
const char* pv_mode_name(PvMode m);

// Template version tag embedded in dataset metadata.
inline constexpr const char* kTemplateVersion = "v1";

struct PromptVariant {
    bool distill = false; // false: hint-free solver prompt
    PvMode pv_mode = PvMode::omitted;
    bool include_themes = false;
    bool feigned = true;

    static PromptVariant solver() { return PromptVariant{}; }
    static PromptVariant distill_best_move() {
        return PromptVariant{true, PvMode::best_move, true, true};
    }
    static PromptVariant distill_multi_pv() {
        return PromptVariant{true, PvMode::multi_pv, true, true};
    }
    static PromptVariant distill_without_themes() {
        return PromptVariant{true, PvMode::best_move, false, true};
    }
    static PromptVariant distill_without_feigned() {
        return PromptVariant{true, PvMode::best_move, true, false};
    }
};

// The student/eval prompt: FEN header + the puzzle-box body. Carries no
// rating, themes, setup move, or PV.
std::string build_solver_prompt(const data::Puzzle& puzzle);
std::string build_solver_prompt(const chess::Position& position);

// The teacher prompt: General Instruction, Context, Task Description.
// multi_pv renders every line, best_move renders line 1 only, omitted drops
// the PVs row; themes containing mateIn1 force the PVs row off;
// include_themes=false drops the Themes row; feigned=false swaps the task
// section for a plain explain-why instruction. Throws MissingAnalysis when a
// PV row is required but no analysis is given.
std::string build_distill_prompt(const data::Puzzle& puzzle, const engine::Analysis* analysis,
                                 const PromptVariant& variant);

// "1. <uci> <uci> ... (cp 35)" / "... (mate 2)", one line per rank.
std::string render_pv_lines(const engine::Analysis& analysis, PvMode mode);

} // namespace cdk::prompt
