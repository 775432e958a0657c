#include "cdk/validate.hpp"
#include "cdk/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace cdk::trace {

using chess::Move;
using chess::Position;

namespace {

constexpr std::string_view kMarker = "FINAL_ANSWER:";

bool is_marker_line(std::string_view line) {
    size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    return line.substr(i).starts_with(kMarker);
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            lines.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return lines;
}

std::string marker_token(std::string_view line) {
    size_t pos = line.find(kMarker);
    std::string_view rest = line.substr(pos + kMarker.size());
    auto words = util::split_ws(rest);
    if (words.empty()) return "";
    std::string token = words[0];
    auto is_punct = [](char c) {
        return std::ispunct(static_cast<unsigned char>(c)) != 0;
    };
    while (!token.empty() && is_punct(token.back())) token.pop_back();
    while (!token.empty() && is_punct(token.front())) token.erase(token.begin());
    return util::to_lower(token);
}

bool alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Case-insensitive phrase search with alphanumeric boundaries on both ends,
// so "rating" does not hit "generating".
bool contains_phrase(const std::string& haystack_lower, const std::string& phrase_lower) {
    if (phrase_lower.empty()) return false;
    size_t pos = 0;
    while ((pos = haystack_lower.find(phrase_lower, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !alnum(haystack_lower[pos - 1]);
        size_t end = pos + phrase_lower.size();
        bool right_ok = end >= haystack_lower.size() || !alnum(haystack_lower[end]);
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

// camelCase tag -> spaced phrase for multi-word tactical names. mateInN
// phrases are deliberately absent: "mate in two" is legitimate prose.
const std::map<std::string, std::string>& mapped_theme_phrases() {
    static const std::map<std::string, std::string> table = {
        {"backRankMate", "back rank mate"},
        {"underPromotion", "under promotion"},
        {"discoveredAttack", "discovered attack"},
        {"hangingPiece", "hanging piece"},
        {"doubleCheck", "double check"},
        {"xRayAttack", "x-ray attack"},
        {"trappedPiece", "trapped piece"},
        {"advancedPawn", "advanced pawn"},
        {"exposedKing", "exposed king"},
        {"kingsideAttack", "kingside attack"},
        {"queensideAttack", "queenside attack"},
        {"defensiveMove", "defensive move"},
        {"quietMove", "quiet move"},
        {"capturingDefender", "capturing the defender"},
        {"smotheredMate", "smothered mate"},
        {"arabianMate", "arabian mate"},
        {"anastasiaMate", "anastasia mate"},
        {"bodenMate", "boden mate"},
        {"hookMate", "hook mate"},
        {"cornerMate", "corner mate"},
        {"dovetailMate", "dovetail mate"},
        {"doubleBishopMate", "double bishop mate"},
        {"killBoxMate", "kill box mate"},
        {"vukovicMate", "vukovic mate"},
        {"triangleMate", "triangle mate"},
        {"balestraMate", "balestra mate"},
        {"blindSwineMate", "blind swine mate"},
    };
    return table;
}

// UCI-shaped tokens in prose, with alnum boundaries.
std::vector<std::pair<std::string, Move>> uci_tokens(std::string_view text) {
    std::vector<std::pair<std::string, Move>> out;
    for (size_t i = 0; i + 4 <= text.size(); ++i) {
        if (i > 0 && alnum(text[i - 1])) continue;
        size_t len = 0;
        if (i + 5 <= text.size()) {
            char c = text[i + 4];
            if (c == 'q' || c == 'r' || c == 'b' || c == 'n') len = 5;
        }
        for (size_t try_len : {len, size_t{4}}) {
            if (try_len == 0) continue;
            if (i + try_len < text.size() && alnum(text[i + try_len])) continue;
            auto m = Move::try_parse(text.substr(i, try_len));
            if (m) {
                out.emplace_back(std::string(text.substr(i, try_len)), *m);
                break;
            }
        }
    }
    return out;
}

} // namespace

Move extract_final_answer(std::string_view text) {
    std::string last_marker_line;
    bool found = false;
    for (auto line : split_lines(text)) {
        if (is_marker_line(line)) {
            last_marker_line = std::string(line);
            found = true;
        }
    }
    if (!found) fail(Errc::NoMarker, "no FINAL_ANSWER line");
    std::string token = marker_token(last_marker_line);
    auto m = Move::try_parse(token);
    if (!m) fail(Errc::UnparseableMove, "'" + token + "' is not a UCI move");
    return *m;
}

int count_sentences(std::string_view text) {
    std::string prose;
    for (auto line : split_lines(text)) {
        if (is_marker_line(line)) continue;
        prose.append(line);
        prose.push_back('\n');
    }

    int count = 0;
    bool in_run = false;
    for (size_t i = 0; i < prose.size(); ++i) {
        char c = prose[i];
        bool terminator = c == '!' || c == '?' ||
                          (c == '.' && !(i > 0 && std::isdigit(static_cast<unsigned char>(prose[i - 1]))));
        if (terminator) {
            bool ends = i + 1 >= prose.size() ||
                        std::isspace(static_cast<unsigned char>(prose[i + 1])) ||
                        prose[i + 1] == '.' || prose[i + 1] == '!' || prose[i + 1] == '?';
            if (ends && !in_run) {
                ++count;
                in_run = true;
            }
        } else if (c != '.' || !in_run) {
            in_run = false;
        }
    }
    return count;
}

ValidationReport validate_trace(std::string_view trace, const data::Puzzle& puzzle,
                                const Move& expected, const engine::Analysis* analysis,
                                const ValidatorConfig& cfg) {
    ValidationReport report;
    report.puzzle_id = puzzle.id;

    // 1. answer_match
    {
        CheckResult check{"answer_match", false, "", true};
        try {
            Move got = extract_final_answer(trace);
            report.extracted_answer = got;
            check.pass = got == expected;
            if (!check.pass)
                check.detail = "extracted " + got.uci() + ", expected " + expected.uci();
        } catch (const Error& e) {
            check.detail = e.what();
        }
        report.checks.push_back(std::move(check));
    }

    // 2. sentence_count
    {
        int lo = puzzle.has_theme("mateIn1") ? cfg.mate_in_one_min_sentences : cfg.min_sentences;
        int n = count_sentences(trace);
        CheckResult check{"sentence_count", n >= lo && n <= cfg.max_sentences,
                          std::to_string(n) + " sentences, band [" + std::to_string(lo) + "," +
                              std::to_string(cfg.max_sentences) + "]",
                          true};
        report.checks.push_back(std::move(check));
    }

    // 3. forbidden_phrases
    {
        std::vector<std::string> phrases = {"I see",          "I notice",
                                            "I was given",    "the solution provided",
                                            "engine score",   "centipawn",
                                            "Stockfish",      "rating"};
        for (const auto& t : puzzle.themes) {
            phrases.push_back(t);
            auto it = mapped_theme_phrases().find(t);
            if (it != mapped_theme_phrases().end()) phrases.push_back(it->second);
        }
        std::string lower = util::to_lower(trace);
        std::string hits;
        for (const auto& phrase : phrases) {
            if (contains_phrase(lower, util::to_lower(phrase))) {
                if (!hits.empty()) hits += ", ";
                hits += "'" + phrase + "'";
            }
        }
        report.checks.push_back(CheckResult{"forbidden_phrases", hits.empty(), hits, true});
    }

    // 4. no_marker_duplication
    {
        int markers = 0;
        for (auto line : split_lines(trace)) markers += is_marker_line(line);
        report.checks.push_back(CheckResult{"no_marker_duplication", markers == 1,
                                            std::to_string(markers) + " FINAL_ANSWER lines", true});
    }

    // 5. move_grounding (soft): every UCI-shaped token must be legal somewhere
    // along the master line replay.
    if (cfg.check_grounding) {
        std::vector<Position> stops;
        stops.push_back(puzzle.position);
        auto follow = [&stops](const Position& start, const std::vector<Move>& moves) {
            Position cursor = start;
            for (const Move& m : moves) {
                try {
                    cursor = chess::apply_move(cursor, m);
                } catch (const Error&) {
                    return;
                }
                stops.push_back(cursor);
            }
        };
        if (analysis) {
            for (const auto& line : analysis->lines) follow(analysis->position, line.moves);
        }
        std::vector<Move> dataset_line;
        dataset_line.push_back(puzzle.solution);
        dataset_line.insert(dataset_line.end(), puzzle.continuation.begin(),
                            puzzle.continuation.end());
        follow(puzzle.position, dataset_line);

        std::set<std::string> offenders;
        for (const auto& [text, move] : uci_tokens(trace)) {
            bool grounded = false;
            for (const auto& pos : stops) {
                auto legal = chess::legal_moves(pos);
                if (std::find(legal.begin(), legal.end(), move) != legal.end()) {
                    grounded = true;
                    break;
                }
            }
            if (!grounded) offenders.insert(text);
        }
        std::string detail;
        for (const auto& o : offenders) {
            if (!detail.empty()) detail += ", ";
            detail += o;
        }
        report.checks.push_back(CheckResult{"move_grounding", offenders.empty(), detail, false});
    }

    report.accepted = true;
    for (const auto& check : report.checks)
        if (check.mandatory && !check.pass) report.accepted = false;
    return report;
}

util::ojson report_to_json(const ValidationReport& report) {
    util::ojson j;
    j["puzzle_id"] = report.puzzle_id;
    j["verdict"] = report.accepted ? "accepted" : "rejected";
    j["extracted_answer"] =
        report.extracted_answer ? util::ojson(report.extracted_answer->uci()) : util::ojson(nullptr);
    util::ojson checks = util::ojson::array();
    for (const auto& check : report.checks) {
        util::ojson c;
        c["name"] = check.name;
        c["pass"] = check.pass;
        c["detail"] = check.detail;
        c["mandatory"] = check.mandatory;
        checks.push_back(std::move(c));
    }
    j["checks"] = std::move(checks);
    return j;
}

} // namespace cdk::trace
