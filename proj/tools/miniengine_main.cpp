// A small deterministic UCI engine: fixed-depth alpha-beta over the cdk move
// generator, material evaluation with a capture quiescence, mate-distance
// pruning, and MultiPV. It exists so the toolkit can be exercised end to end
// on hosts without a full-strength engine installed; on forced-mate puzzles
// the mate-distance pruning makes even `go depth 24` cheap.

#include "cdk/chess.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cdk::chess;

namespace {

constexpr int kMate = 100000;
constexpr int kInf = 1000000;

int piece_value(PieceKind k) {
    switch (k) {
    case PieceKind::pawn: return 100;
    case PieceKind::knight: return 320;
    case PieceKind::bishop: return 330;
    case PieceKind::rook: return 500;
    case PieceKind::queen: return 900;
    case PieceKind::king: return 0;
    }
    return 0;
}

int evaluate(const Position& p) {
    int score = 0;
    for (int i = 0; i < 64; ++i) {
        PieceCode pc = p.board[static_cast<size_t>(i)];
        if (pc == kEmpty) continue;
        int v = piece_value(kind_of(pc));
        int file = i & 7;
        int rank = i >> 3;
        // small centralization nudge keeps play deterministic but less aimless
        if (file >= 2 && file <= 5 && rank >= 2 && rank <= 5) v += 5;
        score += pc > 0 ? v : -v;
    }
    return p.side_to_move == Color::white ? score : -score;
}

bool is_capture(const Position& p, const Move& m) {
    if (p.at(m.to) != kEmpty) return true;
    return kind_of(p.at(m.from)) == PieceKind::pawn && p.en_passant && m.to == *p.en_passant;
}

int qsearch(const Position& p, int alpha, int beta) {
    int stand = evaluate(p);
    if (stand >= beta) return stand;
    if (stand > alpha) alpha = stand;
    for (const Move& m : legal_moves(p)) {
        if (!is_capture(p, m) && !m.promotion) continue;
        int score = -qsearch(apply_move_unchecked(p, m), -beta, -alpha);
        if (score >= beta) return score;
        if (score > alpha) alpha = score;
    }
    return alpha;
}

struct SearchResult {
    int score = -kInf;
    std::vector<Move> pv;
};

SearchResult search(const Position& p, int depth, int alpha, int beta, int ply) {
    // Mate-distance pruning: nothing deeper can beat a shorter mate already
    // on the path, which keeps deep fixed-depth runs cheap on forced mates.
    alpha = std::max(alpha, -kMate + ply);
    beta = std::min(beta, kMate - ply - 1);
    if (alpha >= beta) return {alpha, {}};

    auto moves = legal_moves(p);
    if (moves.empty()) return {in_check(p, p.side_to_move) ? -(kMate - ply) : 0, {}};
    if (depth <= 0) return {qsearch(p, alpha, beta), {}};

    std::stable_sort(moves.begin(), moves.end(), [&](const Move& a, const Move& b) {
        return is_capture(p, a) > is_capture(p, b);
    });

    SearchResult best;
    for (const Move& m : moves) {
        SearchResult child = search(apply_move_unchecked(p, m), depth - 1, -beta, -alpha, ply + 1);
        int score = -child.score;
        if (score > best.score) {
            best.score = score;
            best.pv.assign(1, m);
            best.pv.insert(best.pv.end(), child.pv.begin(), child.pv.end());
        }
        if (score > alpha) alpha = score;
        if (alpha >= beta) break;
    }
    return best;
}

std::string score_text(int score) {
    if (score >= kMate - 1000) return "mate " + std::to_string((kMate - score + 1) / 2);
    if (score <= -kMate + 1000) return "mate -" + std::to_string((kMate + score + 1) / 2);
    return "cp " + std::to_string(score);
}

struct RootLine {
    Move move;
    int score = -kInf;
    std::vector<Move> pv;
};

void emit_info(int depth, int rank, const RootLine& line) {
    std::cout << "info depth " << depth << " multipv " << rank << " score "
              << score_text(line.score) << " pv";
    std::cout << " " << line.move.uci();
    for (const Move& m : line.pv) std::cout << " " << m.uci();
    std::cout << "\n";
}

void go(const Position& p, int max_depth, int multipv) {
    auto moves = legal_moves(p);
    if (moves.empty()) {
        std::cout << "bestmove (none)" << std::endl;
        return;
    }

    std::vector<RootLine> order;
    for (const Move& m : moves) order.push_back(RootLine{m, 0, {}});

    for (int depth = 1; depth <= max_depth; ++depth) {
        if (multipv <= 1) {
            int alpha = -kInf;
            RootLine best;
            for (auto& line : order) {
                SearchResult child =
                    search(apply_move_unchecked(p, line.move), depth - 1, -kInf, -alpha, 1);
                line.score = -child.score;
                line.pv = child.pv;
                if (line.score > alpha) alpha = line.score;
                if (best.score == -kInf || line.score > best.score) best = line;
            }
            std::stable_sort(order.begin(), order.end(),
                             [](const RootLine& a, const RootLine& b) { return a.score > b.score; });
            emit_info(depth, 1, order.front());
        } else {
            for (auto& line : order) {
                SearchResult child =
                    search(apply_move_unchecked(p, line.move), depth - 1, -kInf, kInf, 1);
                line.score = -child.score;
                line.pv = child.pv;
            }
            std::stable_sort(order.begin(), order.end(),
                             [](const RootLine& a, const RootLine& b) { return a.score > b.score; });
            for (int rank = 1; rank <= multipv && rank <= static_cast<int>(order.size()); ++rank)
                emit_info(depth, rank, order[static_cast<size_t>(rank - 1)]);
        }
    }
    std::cout << "bestmove " << order.front().move.uci() << std::endl;
}

Position position_from_command(const std::vector<std::string>& tokens) {
    Position p = start_position();
    size_t i = 1;
    if (i < tokens.size() && tokens[i] == "startpos") {
        ++i;
    } else if (i < tokens.size() && tokens[i] == "fen") {
        std::string fen;
        for (++i; i < tokens.size() && tokens[i] != "moves"; ++i) {
            if (!fen.empty()) fen += ' ';
            fen += tokens[i];
        }
        p = parse_fen(fen);
    }
    if (i < tokens.size() && tokens[i] == "moves")
        for (++i; i < tokens.size(); ++i) p = apply_move(p, Move::parse(tokens[i]));
    return p;
}

} // namespace

int main() {
    std::ios::sync_with_stdio(false);
    Position current = start_position();
    int multipv = 1;

    std::string line;
    while (std::getline(std::cin, line)) {
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        for (std::string t; ss >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;
        const std::string& cmd = tokens[0];

        if (cmd == "uci") {
            std::cout << "id name cdk-miniengine\n";
            std::cout << "id author chessdistill\n";
            std::cout << "option name MultiPV type spin default 1 min 1 max 16\n";
            std::cout << "option name Threads type spin default 1 min 1 max 1\n";
            std::cout << "option name Hash type spin default 16 min 1 max 1024\n";
            std::cout << "uciok" << std::endl;
        } else if (cmd == "isready") {
            std::cout << "readyok" << std::endl;
        } else if (cmd == "setoption") {
            // setoption name <Name> value <V>; only MultiPV changes behavior
            for (size_t i = 1; i + 2 < tokens.size(); ++i)
                if (tokens[i] == "name" && tokens[i + 1] == "MultiPV" && tokens[i + 2] == "value" &&
                    i + 3 < tokens.size())
                    multipv = std::max(1, std::atoi(tokens[i + 3].c_str()));
        } else if (cmd == "ucinewgame") {
            current = start_position();
        } else if (cmd == "position") {
            try {
                current = position_from_command(tokens);
            } catch (const std::exception& e) {
                std::cout << "info string bad position: " << e.what() << std::endl;
            }
        } else if (cmd == "go") {
            int depth = 6;
            for (size_t i = 1; i + 1 < tokens.size(); ++i)
                if (tokens[i] == "depth") depth = std::max(1, std::atoi(tokens[i + 1].c_str()));
            go(current, depth, multipv);
        } else if (cmd == "stop") {
            // searches are synchronous; nothing to interrupt
        } else if (cmd == "quit") {
            break;
        }
    }
    return 0;
}
