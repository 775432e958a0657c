#include "cdk/prompt.hpp"
#include "cdk/errors.hpp"

#include <sstream>

namespace cdk::prompt {

PvMode pv_mode_from_name(const std::string& name) {
    if (name == "best_move") return PvMode::best_move;
    if (name == "multi_pv") return PvMode::multi_pv;
    if (name == "omitted") return PvMode::omitted;
    fail(Errc::ConfigParse, "unknown pv mode '" + name + "'");
}

const char* pv_mode_name(PvMode m) {
    switch (m) {
    case PvMode::best_move: return "best_move";
    case PvMode::multi_pv: return "multi_pv";
    case PvMode::omitted: return "omitted";
    }
    return "?";
}

std::string build_solver_prompt(const chess::Position& position) {
    std::string fen = chess::format_fen(position);
    std::ostringstream out;
    out << "FEN: " << fen << "\n\n";
    out << "You are given a chess position in FEN: " << fen
        << ". Find the best move for the side to play. "
        << chess::render_piece_arrangement(position) << ". Legal moves: "
        << chess::render_legal_moves(position)
        << ". Analyze step by step and explain your reasoning. Finish with a single line "
           "formatted EXACTLY as: FINAL_ANSWER: <answer>. Use UCI notation (e.g., e2e4, c2b1q) "
           "for the final answer.";
    return out.str();
}

std::string build_solver_prompt(const data::Puzzle& puzzle) {
    return build_solver_prompt(puzzle.position);
}

std::string render_pv_lines(const engine::Analysis& analysis, PvMode mode) {
    std::ostringstream out;
    for (const auto& line : analysis.lines) {
        if (mode == PvMode::best_move && line.rank > 1) break;
        if (line.rank > 1) out << "\n";
        out << line.rank << ".";
        for (const auto& m : line.moves) out << " " << m.uci();
        out << " (" << (line.score.is_mate ? "mate " : "cp ") << line.score.value << ")";
    }
    return out.str();
}

std::string build_distill_prompt(const data::Puzzle& puzzle, const engine::Analysis* analysis,
                                 const PromptVariant& variant) {
    PvMode pv_mode = variant.pv_mode;
    if (puzzle.has_theme("mateIn1")) pv_mode = PvMode::omitted;
    if (pv_mode != PvMode::omitted && analysis == nullptr)
        fail(Errc::MissingAnalysis, "variant renders PVs but no analysis was supplied for puzzle " +
                                        puzzle.id);

    const std::string move = puzzle.solution.uci();
    std::ostringstream out;

    out << "You are a chess grandmaster generating training data for teaching small LLMs to "
           "solve chess puzzles.\n"
           "\n"
           "CRITICAL: The small model only sees the FEN string. Your analysis must show how to "
           "go from FEN → piece positions → tactical relationships → solution. "
           "Ground everything in explicit square names.\n"
           "\n";

    out << "FEN: " << chess::format_fen(puzzle.position) << "\n";
    out << "Pieces: " << chess::render_piece_arrangement(puzzle.position) << "\n";
    out << "Side to Move: " << chess::side_name(puzzle.position.side_to_move) << "\n";
    out << "Opponent's Last Move: " << puzzle.setup_move.uci() << "\n";
    out << "Solution: " << move << "\n";
    out << "Rating: " << puzzle.rating << "\n";
    if (variant.include_themes) {
        out << "Themes:";
        for (const auto& t : puzzle.themes) out << " " << t;
        out << "\n";
    }
    if (pv_mode != PvMode::omitted) {
        out << "PVs:\n" << render_pv_lines(*analysis, pv_mode) << "\n";
    }
    out << "Legal Moves: " << chess::render_legal_moves(puzzle.position) << "\n\n";

    if (variant.feigned) {
        out << "TASK: Write natural chain-of-thought analysis arriving at " << move << ".\n"
            << "\n"
               "Your analysis should cover (in natural prose, vary the structure):\n"
               "- Where key pieces are (use square names: \"the queen on h5\", \"king on g1\")\n"
               "- What tactical relationship exists (attacks, pins, weak squares, defender "
               "counts)\n"
               "- Why the move works (what it threatens, why opponent can't respond adequately)\n"
               "\n"
               "Style:\n"
               "- Objective voice, no \"I see/notice\"\n"
               "- Standard notation with brief clarification when helpful: \"Qxh7+ (queen takes "
               "h7 with check)\"\n"
               "- Never mention engine scores, ratings, themes, or that you were given the "
               "solution\n"
               "- 4-10 sentences, scaled to complexity\n"
               "\n";
    } else {
        out << "TASK: Explain why " << move << " is the best move in this position.\n"
            << "\n"
               "Style:\n"
               "- Objective voice\n"
               "- Standard notation with brief clarification when helpful\n"
               "- 4-10 sentences\n"
               "\n";
    }
    out << "End with exactly: FINAL_ANSWER: " << move;
    return out.str();
}

} // namespace cdk::prompt
