#include "cdk/chess.hpp"
#include "cdk/errors.hpp"

#include <algorithm>

namespace cdk::chess {

namespace {

struct Offset {
    int df;
    int dr;
};

constexpr Offset kKnight[] = {{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
constexpr Offset kKing[] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
constexpr Offset kBishopDirs[] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
constexpr Offset kRookDirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

inline bool on_board(int file, int rank) { return file >= 0 && file < 8 && rank >= 0 && rank < 8; }

} // namespace

Position apply_move_unchecked(const Position& p, const Move& m) {
    Position next = p;
    PieceCode piece = p.at(m.from);
    Color mover = color_of(piece);
    bool is_pawn = kind_of(piece) == PieceKind::pawn;
    bool captured = p.at(m.to) != kEmpty;

    next.en_passant.reset();

    if (is_pawn && p.en_passant && m.to == *p.en_passant && m.from.file() != m.to.file() && !captured) {
        next.set(Square::of(m.to.file(), m.from.rank()), kEmpty);
        captured = true;
    }

    next.set(m.from, kEmpty);
    next.set(m.to, m.promotion ? make_piece(mover, *m.promotion) : piece);

    if (is_pawn && std::abs(m.to.rank() - m.from.rank()) == 2)
        next.en_passant = Square::of(m.from.file(), (m.from.rank() + m.to.rank()) / 2);

    if (kind_of(piece) == PieceKind::king) {
        if (mover == Color::white) {
            next.castling.white_king = next.castling.white_queen = false;
        } else {
            next.castling.black_king = next.castling.black_queen = false;
        }
        if (m.from.file() == 4 && std::abs(m.to.file() - m.from.file()) == 2) {
            int rank = m.from.rank();
            bool kingside = m.to.file() == 6;
            Square rook_from = Square::of(kingside ? 7 : 0, rank);
            Square rook_to = Square::of(kingside ? 5 : 3, rank);
            next.set(rook_to, next.at(rook_from));
            next.set(rook_from, kEmpty);
        }
    }

    // A rook leaving or anything landing on a corner kills that right.
    for (Square corner : {m.from, m.to}) {
        if (corner == Square::of(0, 0)) next.castling.white_queen = false;
        if (corner == Square::of(7, 0)) next.castling.white_king = false;
        if (corner == Square::of(0, 7)) next.castling.black_queen = false;
        if (corner == Square::of(7, 7)) next.castling.black_king = false;
    }

    next.halfmove_clock = (is_pawn || captured) ? 0 : p.halfmove_clock + 1;
    if (mover == Color::black) ++next.fullmove_number;
    next.side_to_move = opposite(mover);
    return next;
}

namespace {

void push_pawn_move(std::vector<Move>& out, Square from, Square to) {
    if (to.rank() == 0 || to.rank() == 7) {
        for (PieceKind k : {PieceKind::queen, PieceKind::rook, PieceKind::bishop, PieceKind::knight})
            out.push_back(Move{from, to, k});
    } else {
        out.push_back(Move{from, to, std::nullopt});
    }
}

std::vector<Move> pseudo_moves(const Position& p) {
    std::vector<Move> out;
    out.reserve(64);
    Color us = p.side_to_move;
    Color them = opposite(us);
    int forward = us == Color::white ? 1 : -1;
    int start_rank = us == Color::white ? 1 : 6;

    for (int idx = 0; idx < 64; ++idx) {
        Square from{static_cast<int8_t>(idx)};
        PieceCode piece = p.at(from);
        if (piece == kEmpty || !is_color(piece, us)) continue;
        int file = from.file();
        int rank = from.rank();

        switch (kind_of(piece)) {
        case PieceKind::pawn: {
            int r1 = rank + forward;
            if (on_board(file, r1) && p.at(Square::of(file, r1)) == kEmpty) {
                push_pawn_move(out, from, Square::of(file, r1));
                int r2 = rank + 2 * forward;
                if (rank == start_rank && p.at(Square::of(file, r2)) == kEmpty)
                    out.push_back(Move{from, Square::of(file, r2), std::nullopt});
            }
            for (int df : {-1, 1}) {
                int f = file + df;
                if (!on_board(f, r1)) continue;
                Square to = Square::of(f, r1);
                if (p.at(to) != kEmpty && is_color(p.at(to), them)) push_pawn_move(out, from, to);
                else if (p.en_passant && to == *p.en_passant) out.push_back(Move{from, to, std::nullopt});
            }
            break;
        }
        case PieceKind::knight:
            for (auto [df, dr] : kKnight) {
                int f = file + df, r = rank + dr;
                if (!on_board(f, r)) continue;
                Square to = Square::of(f, r);
                if (p.at(to) == kEmpty || is_color(p.at(to), them)) out.push_back(Move{from, to, std::nullopt});
            }
            break;
        case PieceKind::king:
            for (auto [df, dr] : kKing) {
                int f = file + df, r = rank + dr;
                if (!on_board(f, r)) continue;
                Square to = Square::of(f, r);
                if (p.at(to) == kEmpty || is_color(p.at(to), them)) out.push_back(Move{from, to, std::nullopt});
            }
            break;
        case PieceKind::bishop:
        case PieceKind::rook:
        case PieceKind::queen: {
            PieceKind k = kind_of(piece);
            auto scan = [&](const Offset* dirs, int n) {
                for (int d = 0; d < n; ++d) {
                    int f = file + dirs[d].df, r = rank + dirs[d].dr;
                    while (on_board(f, r)) {
                        Square to = Square::of(f, r);
                        PieceCode target = p.at(to);
                        if (target == kEmpty) {
                            out.push_back(Move{from, to, std::nullopt});
                        } else {
                            if (is_color(target, them)) out.push_back(Move{from, to, std::nullopt});
                            break;
                        }
                        f += dirs[d].df;
                        r += dirs[d].dr;
                    }
                }
            };
            if (k != PieceKind::rook) scan(kBishopDirs, 4);
            if (k != PieceKind::bishop) scan(kRookDirs, 4);
            break;
        }
        }
    }

    // Castling: rights imply king/rook are home (enforced at FEN parse and in
    // apply_unchecked), so only emptiness and attack conditions remain.
    int home = us == Color::white ? 0 : 7;
    bool king_right = us == Color::white ? p.castling.white_king : p.castling.black_king;
    bool queen_right = us == Color::white ? p.castling.white_queen : p.castling.black_queen;
    if ((king_right || queen_right) && !square_attacked(p, Square::of(4, home), them)) {
        if (king_right && p.at(Square::of(5, home)) == kEmpty && p.at(Square::of(6, home)) == kEmpty &&
            !square_attacked(p, Square::of(5, home), them))
            out.push_back(Move{Square::of(4, home), Square::of(6, home), std::nullopt});
        if (queen_right && p.at(Square::of(3, home)) == kEmpty && p.at(Square::of(2, home)) == kEmpty &&
            p.at(Square::of(1, home)) == kEmpty && !square_attacked(p, Square::of(3, home), them))
            out.push_back(Move{Square::of(4, home), Square::of(2, home), std::nullopt});
    }

    return out;
}

std::vector<Move> legal_moves_unsorted(const Position& p) {
    std::vector<Move> out;
    auto pseudo = pseudo_moves(p);
    out.reserve(pseudo.size());
    for (const Move& m : pseudo) {
        Position next = apply_move_unchecked(p, m);
        if (!in_check(next, p.side_to_move)) out.push_back(m);
    }
    return out;
}

} // namespace

bool square_attacked(const Position& p, Square sq, Color by) {
    int file = sq.file();
    int rank = sq.rank();

    int pawn_dr = by == Color::white ? -1 : 1; // attacker sits one rank behind its push direction
    PieceCode pawn = make_piece(by, PieceKind::pawn);
    for (int df : {-1, 1}) {
        int f = file + df, r = rank + pawn_dr;
        if (on_board(f, r) && p.at(Square::of(f, r)) == pawn) return true;
    }

    PieceCode knight = make_piece(by, PieceKind::knight);
    for (auto [df, dr] : kKnight) {
        int f = file + df, r = rank + dr;
        if (on_board(f, r) && p.at(Square::of(f, r)) == knight) return true;
    }

    PieceCode king = make_piece(by, PieceKind::king);
    for (auto [df, dr] : kKing) {
        int f = file + df, r = rank + dr;
        if (on_board(f, r) && p.at(Square::of(f, r)) == king) return true;
    }

    auto ray_hits = [&](const Offset* dirs, PieceKind slider) {
        PieceCode want = make_piece(by, slider);
        PieceCode queen = make_piece(by, PieceKind::queen);
        for (int d = 0; d < 4; ++d) {
            int f = file + dirs[d].df, r = rank + dirs[d].dr;
            while (on_board(f, r)) {
                PieceCode pc = p.at(Square::of(f, r));
                if (pc != kEmpty) {
                    if (pc == want || pc == queen) return true;
                    break;
                }
                f += dirs[d].df;
                r += dirs[d].dr;
            }
        }
        return false;
    };
    if (ray_hits(kBishopDirs, PieceKind::bishop)) return true;
    if (ray_hits(kRookDirs, PieceKind::rook)) return true;
    return false;
}

bool in_check(const Position& p, Color c) {
    auto ksq = p.king_square(c);
    return ksq && square_attacked(p, *ksq, opposite(c));
}

std::vector<Move> legal_moves(const Position& p) {
    auto moves = legal_moves_unsorted(p);
    std::sort(moves.begin(), moves.end(),
              [](const Move& a, const Move& b) { return a.uci() < b.uci(); });
    return moves;
}

Position apply_move(const Position& p, const Move& m) {
    auto moves = legal_moves_unsorted(p);
    if (std::find(moves.begin(), moves.end(), m) == moves.end())
        fail(Errc::IllegalMove, m.uci() + " in " + format_fen(p));
    return apply_move_unchecked(p, m);
}

std::uint64_t perft(const Position& p, int depth) {
    if (depth <= 0) return 1;
    auto moves = legal_moves_unsorted(p);
    if (depth == 1) return moves.size();
    std::uint64_t total = 0;
    for (const Move& m : moves) total += perft(apply_move_unchecked(p, m), depth - 1);
    return total;
}

} // namespace cdk::chess
