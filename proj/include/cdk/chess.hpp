#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdk::chess {

enum class Color : int8_t { white = 0, black = 1 };

inline Color opposite(Color c) { return c == Color::white ? Color::black : Color::white; }

enum class PieceKind : int8_t { pawn = 1, knight, bishop, rook, queen, king };

// a1 = 0, b1 = 1, ..., h8 = 63
struct Square {
    int8_t index = 0;

    static Square of(int file, int rank) { return Square{static_cast<int8_t>(file + 8 * rank)}; }
    static Square parse(std::string_view text); // throws BadSquare
    static std::optional<Square> try_parse(std::string_view text);

    int file() const { return index & 7; }
    int rank() const { return index >> 3; }
    std::string text() const;

    auto operator<=>(const Square&) const = default;
};

struct Move {
    Square from;
    Square to;
    std::optional<PieceKind> promotion;

    std::string uci() const;
    static Move parse(std::string_view uci); // throws BadUciMove
    static std::optional<Move> try_parse(std::string_view uci);

    auto operator<=>(const Move&) const = default;
};

// Signed piece codes: 0 empty, +k white, -k black where k = PieceKind.
using PieceCode = int8_t;
constexpr PieceCode kEmpty = 0;

inline PieceCode make_piece(Color c, PieceKind k) {
    auto v = static_cast<int8_t>(k);
    return c == Color::white ? v : static_cast<int8_t>(-v);
}
inline bool is_color(PieceCode p, Color c) { return c == Color::white ? p > 0 : p < 0; }
inline Color color_of(PieceCode p) { return p > 0 ? Color::white : Color::black; }
inline PieceKind kind_of(PieceCode p) { return static_cast<PieceKind>(p > 0 ? p : -p); }

struct CastlingRights {
    bool white_king = false;
    bool white_queen = false;
    bool black_king = false;
    bool black_queen = false;

    bool operator==(const CastlingRights&) const = default;
};

struct Position {
    std::array<PieceCode, 64> board{};
    Color side_to_move = Color::white;
    CastlingRights castling;
    std::optional<Square> en_passant;
    int halfmove_clock = 0;
    int fullmove_number = 1;

    PieceCode at(Square s) const { return board[static_cast<size_t>(s.index)]; }
    void set(Square s, PieceCode p) { board[static_cast<size_t>(s.index)] = p; }
    std::optional<Square> king_square(Color c) const;

    bool operator==(const Position&) const = default;
};

Position start_position();

// Parses a 6-field FEN and enforces the Position invariants (one king per
// side, side not to move not in check, en-passant square plausible, pawn
// counts, no pawns on ranks 1/8). Each failure mode has its own Errc.
Position parse_fen(std::string_view fen);
std::string format_fen(const Position& p);

bool square_attacked(const Position& p, Square sq, Color by);
bool in_check(const Position& p, Color c);

// Complete legal move set, sorted by UCI text. Empty means mate or stalemate.
std::vector<Move> legal_moves(const Position& p);

// Successor position; throws IllegalMove unless m is in legal_moves(p).
Position apply_move(const Position& p, const Move& m);

// Same transition without the membership check; the caller must hold a move
// obtained from legal_moves(p).
Position apply_move_unchecked(const Position& p, const Move& m);

std::uint64_t perft(const Position& p, int depth);

// "White: Kg1, Qd1, ...; Black: Kc8, ..." — per side K,Q,R,B,N,P, then by
// square text.
std::string render_piece_arrangement(const Position& p);

// Comma-separated UCI strings in legal_moves order; "" when no legal move.
std::string render_legal_moves(const Position& p);

inline const char* side_name(Color c) { return c == Color::white ? "White" : "Black"; }

} // namespace cdk::chess
