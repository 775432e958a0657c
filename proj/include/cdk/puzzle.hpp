#pragma once

#include "cdk/chess.hpp"
#include "cdk/errors.hpp"
#include "cdk/util.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace cdk::data {

// A normalized Lichess puzzle. The CSV convention: the FEN is one ply before
// the puzzle, the first Moves token is the opponent's setup move, the second
// is the expected answer, the rest is the continuation line. The puzzle is
// posed after the setup move.
struct Puzzle {
    std::string id;
    chess::Position pre_position;
    chess::Move setup_move;
    chess::Position position; // after setup_move
    chess::Move solution;     // first move of the answer line
    std::vector<chess::Move> continuation;
    int rating = 0;
    std::vector<std::string> themes; // sorted, unique
    std::string source_url;

    bool has_theme(std::string_view t) const;
};

struct RowError {
    std::size_t row = 0; // 1-based data row number (header not counted)
    Errc code = Errc::MalformedRow;
    std::string message;
    std::string puzzle_id;
};

struct IngestResult {
    std::vector<Puzzle> puzzles;
    std::vector<RowError> rejects;
    std::size_t rows_total = 0;
};

// Expected header, bit-exact.
extern const char* kLichessCsvHeader;

IngestResult ingest_csv(const std::string& path);
IngestResult ingest_csv_stream(std::istream& in, const std::string& origin);

using ThemeHistogram = std::map<std::string, std::size_t>;
ThemeHistogram theme_histogram(const std::vector<Puzzle>& puzzles);

// Totals / unique themes / rating range / average rating, followed by theme
// count blocks (themes as columns, most frequent first).
std::string stats_report(const std::vector<Puzzle>& puzzles, const std::string& label = "Puzzles");

struct SftRecord {
    std::string puzzle_id;
    std::string prompt;
    std::string response;
    std::string teacher_model;
    std::vector<std::string> themes;
    int rating = 0;
};

struct RlvrRecord {
    std::string puzzle_id;
    std::string prompt;
    std::string ground_truth; // UCI text of the dataset solution
    std::vector<std::string> themes;
    int rating = 0;
};

// One JSON object per line, fixed field order, plus a sibling
// "<stem>.stats.txt" with the theme table.
void emit_sft(const std::vector<SftRecord>& records, const std::string& path);
void emit_rlvr(const std::vector<RlvrRecord>& records, const std::string& path);
std::vector<SftRecord> read_sft(const std::string& path);
std::vector<RlvrRecord> read_rlvr(const std::string& path);

util::ojson puzzle_to_json(const Puzzle& p);
Puzzle puzzle_from_json(const util::ojson& j);
void write_puzzles_jsonl(const std::vector<Puzzle>& puzzles, const std::string& path);
std::vector<Puzzle> read_puzzles_jsonl(const std::string& path);

} // namespace cdk::data
