#include "cdk/chess.hpp"
#include "cdk/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace cdk {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::MalformedFieldCount: return "MalformedFieldCount";
    case Errc::IllegalPieceLetter: return "IllegalPieceLetter";
    case Errc::BadPlacement: return "BadPlacement";
    case Errc::BadSideToMove: return "BadSideToMove";
    case Errc::BadCastling: return "BadCastling";
    case Errc::BadEnPassant: return "BadEnPassant";
    case Errc::BadClock: return "BadClock";
    case Errc::MissingKing: return "MissingKing";
    case Errc::DuplicateKing: return "DuplicateKing";
    case Errc::PawnOnBackRank: return "PawnOnBackRank";
    case Errc::TooManyPawns: return "TooManyPawns";
    case Errc::SideNotToMoveInCheck: return "SideNotToMoveInCheck";
    case Errc::BadSquare: return "BadSquare";
    case Errc::BadUciMove: return "BadUciMove";
    case Errc::IllegalMove: return "IllegalMove";
    case Errc::SpawnFailure: return "SpawnFailure";
    case Errc::HandshakeTimeout: return "HandshakeTimeout";
    case Errc::UnsupportedOption: return "UnsupportedOption";
    case Errc::EngineCrashed: return "EngineCrashed";
    case Errc::AnalysisTimeout: return "AnalysisTimeout";
    case Errc::ProtocolParseError: return "ProtocolParseError";
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::IllegalSetupMove: return "IllegalSetupMove";
    case Errc::IllegalSolution: return "IllegalSolution";
    case Errc::IoFailure: return "IoFailure";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::InsufficientPopulation: return "InsufficientPopulation";
    case Errc::MissingAnalysis: return "MissingAnalysis";
    case Errc::AuthFailure: return "AuthFailure";
    case Errc::AuthConfigMissing: return "AuthConfigMissing";
    case Errc::RateLimited: return "RateLimited";
    case Errc::ProviderError: return "ProviderError";
    case Errc::Timeout: return "Timeout";
    case Errc::NoMarker: return "NoMarker";
    case Errc::UnparseableMove: return "UnparseableMove";
    case Errc::InsufficientCell: return "InsufficientCell";
    case Errc::AbortedRun: return "AbortedRun";
    case Errc::ConfigParse: return "ConfigParse";
    case Errc::UnknownKey: return "UnknownKey";
    }
    return "UnknownError";
}

} // namespace cdk

namespace cdk::chess {

std::string Square::text() const {
    std::string s(2, ' ');
    s[0] = static_cast<char>('a' + file());
    s[1] = static_cast<char>('1' + rank());
    return s;
}

std::optional<Square> Square::try_parse(std::string_view text) {
    if (text.size() != 2) return std::nullopt;
    if (text[0] < 'a' || text[0] > 'h' || text[1] < '1' || text[1] > '8') return std::nullopt;
    return Square::of(text[0] - 'a', text[1] - '1');
}

Square Square::parse(std::string_view text) {
    auto sq = try_parse(text);
    if (!sq) fail(Errc::BadSquare, "not a square: '" + std::string(text) + "'");
    return *sq;
}

static char promotion_letter(PieceKind k) {
    switch (k) {
    case PieceKind::queen: return 'q';
    case PieceKind::rook: return 'r';
    case PieceKind::bishop: return 'b';
    case PieceKind::knight: return 'n';
    default: return '?';
    }
}

std::string Move::uci() const {
    std::string s = from.text() + to.text();
    if (promotion) s.push_back(promotion_letter(*promotion));
    return s;
}

std::optional<Move> Move::try_parse(std::string_view uci) {
    if (uci.size() != 4 && uci.size() != 5) return std::nullopt;
    auto from = Square::try_parse(uci.substr(0, 2));
    auto to = Square::try_parse(uci.substr(2, 2));
    if (!from || !to || *from == *to) return std::nullopt;
    std::optional<PieceKind> promo;
    if (uci.size() == 5) {
        switch (uci[4]) {
        case 'q': promo = PieceKind::queen; break;
        case 'r': promo = PieceKind::rook; break;
        case 'b': promo = PieceKind::bishop; break;
        case 'n': promo = PieceKind::knight; break;
        default: return std::nullopt;
        }
    }
    return Move{*from, *to, promo};
}

Move Move::parse(std::string_view uci) {
    auto m = try_parse(uci);
    if (!m) fail(Errc::BadUciMove, "not a UCI move: '" + std::string(uci) + "'");
    return *m;
}

std::optional<Square> Position::king_square(Color c) const {
    PieceCode target = make_piece(c, PieceKind::king);
    for (int i = 0; i < 64; ++i)
        if (board[static_cast<size_t>(i)] == target) return Square{static_cast<int8_t>(i)};
    return std::nullopt;
}

Position start_position() {
    return parse_fen("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1");
}

static std::optional<PieceCode> piece_from_letter(char c) {
    Color color = std::isupper(static_cast<unsigned char>(c)) ? Color::white : Color::black;
    switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'p': return make_piece(color, PieceKind::pawn);
    case 'n': return make_piece(color, PieceKind::knight);
    case 'b': return make_piece(color, PieceKind::bishop);
    case 'r': return make_piece(color, PieceKind::rook);
    case 'q': return make_piece(color, PieceKind::queen);
    case 'k': return make_piece(color, PieceKind::king);
    default: return std::nullopt;
    }
}

static char piece_letter(PieceCode p) {
    static const char* white = "?PNBRQK";
    char c = white[static_cast<int>(kind_of(p))];
    return color_of(p) == Color::white ? c : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

static std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

static int parse_nonneg_int(std::string_view s, Errc errc, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || value < 0)
        fail(errc, std::string(what) + " '" + std::string(s) + "'");
    return value;
}

static void check_invariants(const Position& p) {
    int kings[2] = {0, 0};
    int pawns[2] = {0, 0};
    for (int i = 0; i < 64; ++i) {
        PieceCode pc = p.board[static_cast<size_t>(i)];
        if (pc == kEmpty) continue;
        int side = color_of(pc) == Color::white ? 0 : 1;
        if (kind_of(pc) == PieceKind::king) ++kings[side];
        if (kind_of(pc) == PieceKind::pawn) {
            ++pawns[side];
            int rank = i >> 3;
            if (rank == 0 || rank == 7)
                fail(Errc::PawnOnBackRank, "pawn on " + Square{static_cast<int8_t>(i)}.text());
        }
    }
    for (int side = 0; side < 2; ++side) {
        const char* name = side == 0 ? "white" : "black";
        if (kings[side] == 0) fail(Errc::MissingKing, std::string("no ") + name + " king");
        if (kings[side] > 1) fail(Errc::DuplicateKing, std::string("more than one ") + name + " king");
        if (pawns[side] > 8) fail(Errc::TooManyPawns, std::string(name) + " has " + std::to_string(pawns[side]) + " pawns");
    }
    if (p.en_passant) {
        Square ep = *p.en_passant;
        // The target square sits behind the pawn that just double-pushed.
        bool white_pushed = p.side_to_move == Color::black;
        int want_rank = white_pushed ? 2 : 5;
        if (ep.rank() != want_rank)
            fail(Errc::BadEnPassant, "en-passant square " + ep.text() + " on wrong rank");
        Square pusher = Square::of(ep.file(), white_pushed ? 3 : 4);
        Square origin = Square::of(ep.file(), white_pushed ? 1 : 6);
        PieceCode pawn = make_piece(white_pushed ? Color::white : Color::black, PieceKind::pawn);
        if (p.at(ep) != kEmpty || p.at(origin) != kEmpty || p.at(pusher) != pawn)
            fail(Errc::BadEnPassant, "no double push can produce en-passant square " + ep.text());
    }
    if (in_check(p, opposite(p.side_to_move)))
        fail(Errc::SideNotToMoveInCheck, std::string(side_name(opposite(p.side_to_move))) + " is in check but not to move");
}

static void check_castling_consistency(const Position& p) {
    auto piece_at = [&](const char* sq, char letter) {
        PieceCode pc = p.at(Square::parse(sq));
        return pc != kEmpty && piece_letter(pc) == letter;
    };
    if (p.castling.white_king && !(piece_at("e1", 'K') && piece_at("h1", 'R')))
        fail(Errc::BadCastling, "white kingside right without king e1 / rook h1");
    if (p.castling.white_queen && !(piece_at("e1", 'K') && piece_at("a1", 'R')))
        fail(Errc::BadCastling, "white queenside right without king e1 / rook a1");
    if (p.castling.black_king && !(piece_at("e8", 'k') && piece_at("h8", 'r')))
        fail(Errc::BadCastling, "black kingside right without king e8 / rook h8");
    if (p.castling.black_queen && !(piece_at("e8", 'k') && piece_at("a8", 'r')))
        fail(Errc::BadCastling, "black queenside right without king e8 / rook a8");
}

Position parse_fen(std::string_view fen) {
    auto fields = split_ws(fen);
    if (fields.size() != 6)
        fail(Errc::MalformedFieldCount, "expected 6 FEN fields, got " + std::to_string(fields.size()));

    Position p;

    // Field 1: placement, ranks 8..1.
    {
        std::string_view placement = fields[0];
        int rank = 7;
        int file = 0;
        size_t ranks_seen = 1;
        for (char c : placement) {
            if (c == '/') {
                if (file != 8) fail(Errc::BadPlacement, "rank does not span 8 files");
                ++ranks_seen;
                --rank;
                file = 0;
                if (rank < 0) fail(Errc::BadPlacement, "more than 8 ranks");
                continue;
            }
            if (c >= '1' && c <= '8') {
                file += c - '0';
                if (file > 8) fail(Errc::BadPlacement, "rank overflows 8 files");
                continue;
            }
            auto piece = piece_from_letter(c);
            if (!piece) fail(Errc::IllegalPieceLetter, std::string("'") + c + "'");
            if (file > 7) fail(Errc::BadPlacement, "rank overflows 8 files");
            p.set(Square::of(file, rank), *piece);
            ++file;
        }
        if (ranks_seen != 8 || file != 8) fail(Errc::BadPlacement, "placement does not describe 8x8 board");
    }

    // Field 2: side to move.
    if (fields[1] == "w") p.side_to_move = Color::white;
    else if (fields[1] == "b") p.side_to_move = Color::black;
    else fail(Errc::BadSideToMove, "'" + std::string(fields[1]) + "'");

    // Field 3: castling rights.
    if (fields[2] != "-") {
        for (char c : fields[2]) {
            bool* flag = nullptr;
            switch (c) {
            case 'K': flag = &p.castling.white_king; break;
            case 'Q': flag = &p.castling.white_queen; break;
            case 'k': flag = &p.castling.black_king; break;
            case 'q': flag = &p.castling.black_queen; break;
            default: fail(Errc::BadCastling, std::string("'") + c + "'");
            }
            if (*flag) fail(Errc::BadCastling, "duplicate castling flag");
            *flag = true;
        }
    }

    // Field 4: en passant.
    if (fields[3] != "-") {
        auto ep = Square::try_parse(fields[3]);
        if (!ep) fail(Errc::BadEnPassant, "'" + std::string(fields[3]) + "'");
        p.en_passant = *ep;
    }

    // Fields 5-6: clocks.
    p.halfmove_clock = parse_nonneg_int(fields[4], Errc::BadClock, "halfmove clock");
    p.fullmove_number = parse_nonneg_int(fields[5], Errc::BadClock, "fullmove number");
    if (p.fullmove_number < 1) fail(Errc::BadClock, "fullmove number must be >= 1");

    check_invariants(p);
    check_castling_consistency(p);
    return p;
}

std::string format_fen(const Position& p) {
    std::ostringstream out;
    for (int rank = 7; rank >= 0; --rank) {
        int empty = 0;
        for (int file = 0; file < 8; ++file) {
            PieceCode pc = p.at(Square::of(file, rank));
            if (pc == kEmpty) {
                ++empty;
                continue;
            }
            if (empty) out << empty;
            empty = 0;
            out << piece_letter(pc);
        }
        if (empty) out << empty;
        if (rank) out << '/';
    }
    out << ' ' << (p.side_to_move == Color::white ? 'w' : 'b') << ' ';
    std::string rights;
    if (p.castling.white_king) rights += 'K';
    if (p.castling.white_queen) rights += 'Q';
    if (p.castling.black_king) rights += 'k';
    if (p.castling.black_queen) rights += 'q';
    out << (rights.empty() ? "-" : rights) << ' ';
    out << (p.en_passant ? p.en_passant->text() : "-");
    out << ' ' << p.halfmove_clock << ' ' << p.fullmove_number;
    return out.str();
}

std::string render_piece_arrangement(const Position& p) {
    // Listing order within each side: K, Q, R, B, N, P, then square text.
    static const PieceKind order[] = {PieceKind::king, PieceKind::queen, PieceKind::rook,
                                      PieceKind::bishop, PieceKind::knight, PieceKind::pawn};
    std::ostringstream out;
    for (Color c : {Color::white, Color::black}) {
        out << (c == Color::white ? "White: " : "; Black: ");
        bool first = true;
        for (PieceKind k : order) {
            std::vector<std::string> squares;
            for (int i = 0; i < 64; ++i) {
                PieceCode pc = p.board[static_cast<size_t>(i)];
                if (pc != kEmpty && is_color(pc, c) && kind_of(pc) == k)
                    squares.push_back(Square{static_cast<int8_t>(i)}.text());
            }
            std::sort(squares.begin(), squares.end());
            char letter = "?PNBRQK"[static_cast<int>(k)];
            for (const auto& sq : squares) {
                if (!first) out << ", ";
                out << letter << sq;
                first = false;
            }
        }
    }
    return out.str();
}

std::string render_legal_moves(const Position& p) {
    std::string out;
    for (const Move& m : legal_moves(p)) {
        if (!out.empty()) out += ", ";
        out += m.uci();
    }
    return out;
}

} // namespace cdk::chess
