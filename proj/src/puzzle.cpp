#include "cdk/puzzle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cdk::data {

using chess::Move;
using chess::Position;
using util::ojson;

const char* kLichessCsvHeader =
    "PuzzleId,FEN,Moves,Rating,RatingDeviation,Popularity,NbPlays,Themes,GameUrl,OpeningTags";

bool Puzzle::has_theme(std::string_view t) const {
    return std::binary_search(themes.begin(), themes.end(), t);
}

namespace {

// Minimal RFC-4180 splitter; Lichess rows are unquoted but quoting costs
// nothing to honor.
std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<std::string> normalized_themes(const std::vector<std::string>& raw) {
    std::set<std::string> uniq(raw.begin(), raw.end());
    return {uniq.begin(), uniq.end()};
}

Puzzle puzzle_from_row(const std::vector<std::string>& f) {
    Puzzle p;
    p.id = f[0];

    p.pre_position = chess::parse_fen(f[1]); // chess errors surface as MalformedRow

    auto tokens = util::split_ws(f[2]);
    if (tokens.size() < 2)
        fail(Errc::MalformedRow, "Moves needs a setup move and a solution, got '" + f[2] + "'");

    auto setup = Move::try_parse(tokens[0]);
    if (!setup) fail(Errc::IllegalSetupMove, "unparseable setup move '" + tokens[0] + "'");
    p.setup_move = *setup;
    try {
        p.position = chess::apply_move(p.pre_position, p.setup_move);
    } catch (const Error&) {
        fail(Errc::IllegalSetupMove, "setup move " + tokens[0] + " illegal in " + f[1]);
    }

    auto solution = Move::try_parse(tokens[1]);
    if (!solution) fail(Errc::IllegalSolution, "unparseable solution '" + tokens[1] + "'");
    p.solution = *solution;
    Position cursor;
    try {
        cursor = chess::apply_move(p.position, p.solution);
    } catch (const Error&) {
        fail(Errc::IllegalSolution, "solution " + tokens[1] + " illegal after setup move");
    }
    for (size_t i = 2; i < tokens.size(); ++i) {
        auto m = Move::try_parse(tokens[i]);
        if (!m) fail(Errc::IllegalSolution, "unparseable continuation move '" + tokens[i] + "'");
        try {
            cursor = chess::apply_move(cursor, *m);
        } catch (const Error&) {
            fail(Errc::IllegalSolution, "continuation move " + tokens[i] + " illegal at ply " +
                                            std::to_string(i - 1));
        }
        p.continuation.push_back(*m);
    }

    try {
        size_t used = 0;
        p.rating = std::stoi(f[3], &used);
        if (used != f[3].size()) throw std::invalid_argument(f[3]);
    } catch (const std::exception&) {
        fail(Errc::MalformedRow, "bad rating '" + f[3] + "'");
    }
    if (p.rating <= 0) fail(Errc::MalformedRow, "rating must be positive, got " + f[3]);

    p.themes = normalized_themes(util::split_ws(f[7]));
    p.source_url = f[8];
    return p;
}

struct StatsRow {
    int rating;
    const std::vector<std::string>* themes;
};

std::string render_stats(const std::vector<StatsRow>& rows, const std::string& label) {
    std::map<std::string, size_t> hist;
    long long rating_sum = 0;
    int rating_min = 0;
    int rating_max = 0;
    for (const auto& r : rows) {
        rating_sum += r.rating;
        if (rating_min == 0 || r.rating < rating_min) rating_min = r.rating;
        if (r.rating > rating_max) rating_max = r.rating;
        for (const auto& t : *r.themes) ++hist[t];
    }

    std::ostringstream out;
    out << "Total samples   " << util::with_thousands(static_cast<long long>(rows.size())) << "\n";
    out << "Unique themes   " << hist.size() << "\n";
    if (rows.empty()) {
        out << "Rating range    -\n";
        out << "Average rating  -\n";
        return out.str();
    }
    out << "Rating range    " << util::with_thousands(rating_min) << "--"
        << util::with_thousands(rating_max) << "\n";
    out << "Average rating  "
        << util::with_thousands(std::llround(static_cast<double>(rating_sum) /
                                             static_cast<double>(rows.size())))
        << "\n";

    // Theme columns, most frequent first, in blocks of 12.
    std::vector<std::pair<std::string, size_t>> themes(hist.begin(), hist.end());
    std::stable_sort(themes.begin(), themes.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    const size_t per_block = 12;
    for (size_t start = 0; start < themes.size(); start += per_block) {
        size_t end = std::min(themes.size(), start + per_block);
        std::vector<size_t> widths;
        std::vector<std::string> counts;
        for (size_t i = start; i < end; ++i) {
            counts.push_back(util::with_thousands(static_cast<long long>(themes[i].second)));
            widths.push_back(std::max(themes[i].first.size(), counts.back().size()));
        }
        out << "\n" << std::string(label.size(), ' ');
        for (size_t i = start; i < end; ++i) {
            out << "  " << std::string(widths[i - start] - themes[i].first.size(), ' ')
                << themes[i].first;
        }
        out << "\n" << label;
        for (size_t i = start; i < end; ++i) {
            out << "  " << std::string(widths[i - start] - counts[i - start].size(), ' ')
                << counts[i - start];
        }
        out << "\n";
    }
    return out.str();
}

std::string stats_sibling_path(const std::string& path) {
    std::string stem = path;
    const std::string ext = ".jsonl";
    if (stem.size() > ext.size() && stem.ends_with(ext)) stem.resize(stem.size() - ext.size());
    return stem + ".stats.txt";
}

int get_int(const ojson& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        fail(Errc::IoFailure, std::string("record missing integer field '") + key + "'");
    return j[key].get<int>();
}

std::string get_str(const ojson& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        fail(Errc::IoFailure, std::string("record missing string field '") + key + "'");
    return j[key].get<std::string>();
}

std::vector<std::string> get_str_list(const ojson& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        fail(Errc::IoFailure, std::string("record missing array field '") + key + "'");
    std::vector<std::string> out;
    for (const auto& v : j[key]) {
        if (!v.is_string()) fail(Errc::IoFailure, std::string("non-string entry in '") + key + "'");
        out.push_back(v.get<std::string>());
    }
    return out;
}

} // namespace

IngestResult ingest_csv_stream(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) fail(Errc::IoFailure, origin + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kLichessCsvHeader)
        fail(Errc::MalformedRow, origin + ": header mismatch, expected '" +
                                     std::string(kLichessCsvHeader) + "'");

    IngestResult result;
    size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        ++result.rows_total;
        auto fields = split_csv_row(line);
        std::string id = fields.empty() ? "" : fields[0];
        try {
            if (fields.size() != 10)
                fail(Errc::MalformedRow,
                     "expected 10 fields, got " + std::to_string(fields.size()));
            result.puzzles.push_back(puzzle_from_row(fields));
        } catch (const Error& e) {
            Errc code = e.code();
            if (code != Errc::IllegalSetupMove && code != Errc::IllegalSolution)
                code = Errc::MalformedRow;
            result.rejects.push_back(RowError{row, code, e.what(), id});
        }
    }
    return result;
}

IngestResult ingest_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoFailure, "cannot open " + path);
    return ingest_csv_stream(in, path);
}

ThemeHistogram theme_histogram(const std::vector<Puzzle>& puzzles) {
    ThemeHistogram hist;
    for (const auto& p : puzzles)
        for (const auto& t : p.themes) ++hist[t];
    return hist;
}

std::string stats_report(const std::vector<Puzzle>& puzzles, const std::string& label) {
    std::vector<StatsRow> rows;
    rows.reserve(puzzles.size());
    for (const auto& p : puzzles) rows.push_back(StatsRow{p.rating, &p.themes});
    return render_stats(rows, label);
}

void emit_sft(const std::vector<SftRecord>& records, const std::string& path) {
    std::vector<ojson> rows;
    std::vector<StatsRow> stats;
    rows.reserve(records.size());
    for (const auto& r : records) {
        ojson j;
        j["puzzle_id"] = r.puzzle_id;
        j["prompt"] = r.prompt;
        j["response"] = r.response;
        j["teacher_model"] = r.teacher_model;
        j["themes"] = r.themes;
        j["rating"] = r.rating;
        rows.push_back(std::move(j));
        stats.push_back(StatsRow{r.rating, &r.themes});
    }
    util::write_jsonl(path, rows);
    util::write_file(stats_sibling_path(path), render_stats(stats, "SFT"));
}

void emit_rlvr(const std::vector<RlvrRecord>& records, const std::string& path) {
    std::vector<ojson> rows;
    std::vector<StatsRow> stats;
    rows.reserve(records.size());
    for (const auto& r : records) {
        ojson j;
        j["puzzle_id"] = r.puzzle_id;
        j["prompt"] = r.prompt;
        j["ground_truth"] = r.ground_truth;
        j["themes"] = r.themes;
        j["rating"] = r.rating;
        rows.push_back(std::move(j));
        stats.push_back(StatsRow{r.rating, &r.themes});
    }
    util::write_jsonl(path, rows);
    util::write_file(stats_sibling_path(path), render_stats(stats, "RLVR"));
}

std::vector<SftRecord> read_sft(const std::string& path) {
    std::vector<SftRecord> out;
    for (const auto& j : util::read_jsonl(path)) {
        SftRecord r;
        r.puzzle_id = get_str(j, "puzzle_id");
        r.prompt = get_str(j, "prompt");
        r.response = get_str(j, "response");
        r.teacher_model = get_str(j, "teacher_model");
        r.themes = get_str_list(j, "themes");
        r.rating = get_int(j, "rating");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RlvrRecord> read_rlvr(const std::string& path) {
    std::vector<RlvrRecord> out;
    for (const auto& j : util::read_jsonl(path)) {
        RlvrRecord r;
        r.puzzle_id = get_str(j, "puzzle_id");
        r.prompt = get_str(j, "prompt");
        r.ground_truth = get_str(j, "ground_truth");
        r.themes = get_str_list(j, "themes");
        r.rating = get_int(j, "rating");
        out.push_back(std::move(r));
    }
    return out;
}

ojson puzzle_to_json(const Puzzle& p) {
    ojson j;
    j["id"] = p.id;
    j["pre_fen"] = chess::format_fen(p.pre_position);
    j["setup_move"] = p.setup_move.uci();
    j["fen"] = chess::format_fen(p.position);
    j["solution"] = p.solution.uci();
    std::vector<std::string> cont;
    for (const auto& m : p.continuation) cont.push_back(m.uci());
    j["continuation"] = cont;
    j["rating"] = p.rating;
    j["themes"] = p.themes;
    j["source_url"] = p.source_url;
    return j;
}

Puzzle puzzle_from_json(const ojson& j) {
    Puzzle p;
    p.id = get_str(j, "id");
    p.pre_position = chess::parse_fen(get_str(j, "pre_fen"));
    p.setup_move = chess::Move::parse(get_str(j, "setup_move"));
    p.position = chess::apply_move(p.pre_position, p.setup_move);
    if (chess::format_fen(p.position) != get_str(j, "fen"))
        fail(Errc::IoFailure, "puzzle " + p.id + ": stored fen disagrees with setup replay");
    p.solution = chess::Move::parse(get_str(j, "solution"));
    Position cursor = chess::apply_move(p.position, p.solution);
    for (const auto& u : get_str_list(j, "continuation")) {
        p.continuation.push_back(chess::Move::parse(u));
        cursor = chess::apply_move(cursor, p.continuation.back());
    }
    p.rating = get_int(j, "rating");
    p.themes = normalized_themes(get_str_list(j, "themes"));
    p.source_url = get_str(j, "source_url");
    return p;
}

void write_puzzles_jsonl(const std::vector<Puzzle>& puzzles, const std::string& path) {
    std::vector<ojson> rows;
    rows.reserve(puzzles.size());
    for (const auto& p : puzzles) rows.push_back(puzzle_to_json(p));
    util::write_jsonl(path, rows);
}

std::vector<Puzzle> read_puzzles_jsonl(const std::string& path) {
    std::vector<Puzzle> out;
    for (const auto& j : util::read_jsonl(path)) out.push_back(puzzle_from_json(j));
    return out;
}

} // namespace cdk::data
