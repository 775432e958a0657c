// Acceptance suite. Each criterion prints exactly one [PASS]/[FAIL]/[SKIP]
// line; the binary exits nonzero if any criterion fails. SKIP is reserved for
// checks whose external inputs (a full Lichess dump, a production engine) are
// absent on this host; the checks themselves stay implemented and pinned.

#include "cdk/chess.hpp"
#include "cdk/engine.hpp"
#include "cdk/errors.hpp"
#include "cdk/eval.hpp"
#include "cdk/prompt.hpp"
#include "cdk/puzzle.hpp"
#include "cdk/reward.hpp"
#include "cdk/sampler.hpp"
#include "cdk/util.hpp"
#include "cdk/validate.hpp"
#include "chess_oracle.hpp"
#include "sampler_reference.hpp"
#include "test_support.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace cdk;

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

void report_skip(const std::string& name, const std::string& reason) {
    std::cout << "[SKIP] " << name << " — " << reason << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string find_on_path(const std::string& name) {
    const char* path = std::getenv("PATH");
    if (!path) return "";
    for (const auto& dir : util::split(path, ':')) {
        std::string candidate = dir + "/" + name;
        if (::access(candidate.c_str(), X_OK) == 0) return candidate;
    }
    return "";
}

// ---------------------------------------------------------------- criterion 1

void criterion_1_perft() {
    auto t0 = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = true;

    const std::uint64_t start_expect[] = {20, 400, 8902, 197281, 4865609};
    chess::Position start = chess::start_position();
    for (int d = 1; d <= 5; ++d) {
        std::uint64_t impl = chess::perft(start, d);
        std::uint64_t ref = oracle::perft(start, d);
        if (impl != start_expect[d - 1] || ref != impl) {
            ok = false;
            detail << "start d" << d << " impl=" << impl << " oracle=" << ref << "; ";
        }
    }

    struct Tactical {
        const char* fen;
        std::vector<std::uint64_t> expect;
    };
    const Tactical tacticals[] = {
        {"r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1",
         {48, 2039, 97862, 4085603}},
        {"r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1",
         {6, 264, 9467, 422333}},
    };
    for (const auto& t : tacticals) {
        chess::Position p = chess::parse_fen(t.fen);
        for (size_t d = 1; d <= t.expect.size(); ++d) {
            std::uint64_t impl = chess::perft(p, static_cast<int>(d));
            std::uint64_t ref = oracle::perft(p, static_cast<int>(d));
            if (impl != t.expect[d - 1] || ref != impl) {
                ok = false;
                detail << t.fen << " d" << d << " impl=" << impl << " oracle=" << ref << "; ";
            }
        }
    }

    double elapsed = seconds_since(t0);
    if (elapsed >= 60.0) {
        ok = false;
        detail << "runtime " << elapsed << "s >= 60s";
    }
    std::ostringstream summary;
    summary << "start d1-5 + 2 tactical positions d1-4, impl == oracle == published, "
            << std::fixed << std::setprecision(1) << elapsed << "s";
    report("criterion 1: move-generator perft vs independent oracle", ok,
           ok ? summary.str() : detail.str());
}

// ---------------------------------------------------------------- criterion 2

void criterion_2_example_puzzle() {
    auto t0 = std::chrono::steady_clock::now();
    const char* fen = "2kr3r/ppp2Npp/2nbp3/6N1/2PP2n1/4B2q/PP2BP2/R2Q1RK1 b - - 2 15";
    std::string engine_path;
    if (const char* env = std::getenv("CHESSDISTILL_ENGINE")) engine_path = env;
    if (engine_path.empty()) engine_path = find_on_path("stockfish");
    std::string kind = "external engine";
    if (engine_path.empty()) {
        engine_path = CDK_MINIENGINE_PATH;
        kind = "bundled cdk-miniengine";
    }

    bool ok = true;
    std::ostringstream detail;
    try {
        engine::EngineConfig cfg;
        cfg.executable_path = engine_path;
        cfg.depth = 24;
        cfg.per_position_timeout = std::chrono::milliseconds(25000);
        auto session = engine::UciEngine::start(cfg);
        auto analysis = session->analyze(chess::parse_fen(fen), 24, 1);
        if (analysis.best_move.uci() != "h3h2") {
            ok = false;
            detail << "engine best move " << analysis.best_move.uci() << " != h3h2; ";
        }
        if (analysis.depth_reached != 24) {
            ok = false;
            detail << "depth reached " << analysis.depth_reached << " != 24; ";
        }
    } catch (const Error& e) {
        ok = false;
        detail << e.what();
    }

    std::string prompt_text = prompt::build_solver_prompt(chess::parse_fen(fen));
    size_t first = prompt_text.find(fen);
    bool fen_twice = first != std::string::npos && prompt_text.find(fen, first + 1) != std::string::npos;
    if (!fen_twice || prompt_text.find("FINAL_ANSWER: <answer>") == std::string::npos) {
        ok = false;
        detail << "solver prompt malformed; ";
    }

    auto outcome = reward::score("FINAL_ANSWER: h3h2", chess::Move::parse("h3h2"), {});
    if (outcome.reward != 1.0) {
        ok = false;
        detail << "reward != 1; ";
    }

    double elapsed = seconds_since(t0);
    if (elapsed >= 30.0) {
        ok = false;
        detail << "runtime " << elapsed << "s >= 30s";
    }
    std::ostringstream summary;
    summary << "depth-24 best move h3h2 via " << kind << ", prompt + reward verified, "
            << std::fixed << std::setprecision(1) << elapsed << "s";
    report("criterion 2: example-puzzle end-to-end", ok, ok ? summary.str() : detail.str());
}

// ---------------------------------------------------------------- criterion 3

void criterion_3_algorithm1() {
    std::mt19937_64 meta(7001);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        size_t n = 50 + meta() % 951;           // <= 1000 puzzles
        int n_themes = 2 + static_cast<int>(meta() % 29); // <= 30 themes
        std::vector<data::Puzzle> puzzles;
        puzzles.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            std::vector<std::string> themes;
            int k = 1 + static_cast<int>(meta() % 4);
            for (int t = 0; t < k; ++t) themes.push_back("t" + std::to_string(meta() % n_themes));
            puzzles.push_back(testsup::make_puzzle("a" + std::to_string(i), themes,
                                                   500 + static_cast<int>(meta() % 2500),
                                                   static_cast<int>(i % 2)));
        }
        sample::SamplerConfig cfg;
        cfg.strategy = sample::Strategy::balanced;
        cfg.rare_theme_count = 1 + static_cast<int>(meta() % n_themes);
        cfg.per_theme_cap = 1 + static_cast<int>(meta() % 120);
        cfg.seed = meta();

        std::vector<std::string> ours;
        for (const auto& p : sample::sample_balanced(puzzles, cfg)) ours.push_back(p.id);
        auto reference = sampler_ref::balanced(puzzles, cfg.rare_theme_count, cfg.per_theme_cap,
                                               cfg.seed);
        if (ours != reference) ++mismatches;
    }
    report("criterion 3: balanced sampling matches the straight-line reference",
           mismatches == 0,
           mismatches == 0 ? "200 randomized datasets, zero mismatches"
                           : std::to_string(mismatches) + " mismatching datasets");
}

// ---------------------------------------------------------------- criterion 4

// Sampling statistics only need (id, rating, themes); a full chess-validating
// ingest of a 5M-row dump is deliberately bypassed here.
std::vector<data::Puzzle> read_dump_lite(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoFailure, "cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<data::Puzzle> out;
    const data::Puzzle shell = testsup::make_puzzle("shell", {}, 1000, 0);
    while (std::getline(in, line)) {
        auto fields = util::split(line, ',');
        if (fields.size() < 10) continue;
        data::Puzzle p = shell;
        p.id = fields[0];
        try {
            p.rating = std::stoi(fields[3]);
        } catch (...) {
            continue;
        }
        p.themes = util::split_ws(fields[7]);
        std::sort(p.themes.begin(), p.themes.end());
        p.themes.erase(std::unique(p.themes.begin(), p.themes.end()), p.themes.end());
        out.push_back(std::move(p));
    }
    return out;
}

void criterion_4_dump_statistics() {
    const char* env = std::getenv("CHESSDISTILL_LICHESS_CSV");
    if (!env || !*env) {
        report_skip("criterion 4: dataset-statistics soft reproduction (K=50, M=800)",
                    "needs a real Lichess dump; set CHESSDISTILL_LICHESS_CSV to run. The "
                    "tolerances (39,609 ±10%; 66 ±2 themes; mean 1,540 ±75; top-12 theme "
                    "counts ±15%) are pinned in this binary.");
        return;
    }
    bool ok = true;
    std::ostringstream detail;
    try {
        auto puzzles = read_dump_lite(env);
        sample::SamplerConfig cfg;
        cfg.strategy = sample::Strategy::balanced;
        cfg.rare_theme_count = 50;
        cfg.per_theme_cap = 800;
        cfg.seed = 1;
        auto sampled = sample::sample_balanced(puzzles, cfg);

        double total = static_cast<double>(sampled.size());
        if (total < 39609 * 0.9 || total > 39609 * 1.1) {
            ok = false;
            detail << "total " << total << " outside 39,609 ±10%; ";
        }
        auto hist = data::theme_histogram(sampled);
        if (hist.size() < 64 || hist.size() > 68) {
            ok = false;
            detail << "unique themes " << hist.size() << " outside 66 ±2; ";
        }
        double mean = 0;
        for (const auto& p : sampled) mean += p.rating;
        mean /= total;
        if (mean < 1540 - 75 || mean > 1540 + 75) {
            ok = false;
            detail << "mean rating " << mean << " outside 1,540 ±75; ";
        }
        const std::pair<const char*, double> top12[] = {
            {"endgame", 20817}, {"mate", 17971},   {"short", 17205}, {"middlegame", 16210},
            {"crushing", 12957}, {"long", 10236},  {"advantage", 7858}, {"mateIn2", 6930},
            {"oneMove", 6856},  {"mateIn1", 6824}, {"master", 6133}, {"veryLong", 5294}};
        for (const auto& [theme, expect] : top12) {
            double got = hist.count(theme) ? static_cast<double>(hist[theme]) : 0.0;
            if (got < expect * 0.85 || got > expect * 1.15) {
                ok = false;
                detail << theme << " " << got << " outside " << expect << " ±15%; ";
            }
        }
        if (ok)
            detail << "total " << total << ", themes " << hist.size() << ", mean rating "
                   << mean;
    } catch (const Error& e) {
        ok = false;
        detail << e.what();
    }
    report("criterion 4: dataset-statistics soft reproduction (K=50, M=800)", ok, detail.str());
}

// ---------------------------------------------------------------- criterion 5

void criterion_5_reward_properties() {
    bool ok = true;
    std::ostringstream detail;

    struct Worked {
        const char* completion;
        const char* expected;
        double eta;
        double reward;
        reward::Reason reason;
    };
    const Worked worked[] = {
        {"...\nFINAL_ANSWER: h3h2", "h3h2", 0.0, 1.0, reward::Reason::exact_match},
        {"...\nFINAL_ANSWER: h3g2", "h3h2", 0.5, 0.5, reward::Reason::partial_source},
        {"no marker here", "h3h2", 0.2, 0.0, reward::Reason::no_marker},
        {"...\nFINAL_ANSWER: g4h2", "h3h2", 0.2, 0.2, reward::Reason::partial_dest},
    };
    for (const auto& w : worked) {
        reward::RewardConfig cfg;
        cfg.eta = w.eta;
        auto outcome = reward::score(w.completion, std::string_view(w.expected), cfg);
        if (outcome.reward != w.reward || outcome.reason != w.reason) {
            ok = false;
            detail << "worked example '" << w.completion << "' gave " << outcome.reward << "/"
                   << reward::reason_name(outcome.reason) << "; ";
        }
    }

    std::mt19937_64 rng(424242);
    auto square = [&] {
        return std::string(1, static_cast<char>('a' + rng() % 8)) +
               static_cast<char>('1' + rng() % 8);
    };
    auto move = [&] {
        while (true) {
            std::string m = square() + square();
            if (m.substr(0, 2) != m.substr(2, 2)) return m;
        }
    };
    int checked = 0;
    for (int i = 0; i < 10000 && ok; ++i, ++checked) {
        std::string expected = move();
        std::string predicted = move();
        double eta = (i % 3 == 0) ? 0.0 : (i % 3 == 1 ? 0.2 : 0.5);
        int form = i % 5;
        std::string completion;
        switch (form) {
        case 0: completion = "FINAL_ANSWER: " + predicted; break;
        case 1: completion = "prose\nFINAL_ANSWER: " + predicted + "\nFINAL_ANSWER: " + predicted; break;
        case 2: completion = "mentions " + predicted + " but no marker"; break;
        case 3: completion = "FINAL_ANSWER: garbage"; break;
        default: {
            std::string upper = predicted;
            for (char& c : upper) c = static_cast<char>(std::toupper(c));
            completion = "FINAL_ANSWER: " + upper;
        }
        }
        reward::RewardConfig cfg;
        cfg.eta = eta;
        auto outcome = reward::score(completion, std::string_view(expected), cfg);

        bool in_range =
            outcome.reward == 0.0 || outcome.reward == eta || outcome.reward == 1.0;
        if (!in_range) { ok = false; detail << "range violated at case " << i; break; }
        if (eta == 0.0 && outcome.reward != 0.0 && outcome.reward != 1.0) {
            ok = false; detail << "not binary at eta=0, case " << i; break;
        }
        if ((form == 0 || form == 1 || form == 4) && predicted == expected &&
            outcome.reward != 1.0) {
            ok = false; detail << "exact match scored " << outcome.reward << " at case " << i; break;
        }
        if (form == 2 && outcome.reason != reward::Reason::no_marker) {
            ok = false; detail << "no_marker expected at case " << i; break;
        }
        if (form == 3 && outcome.reason != reward::Reason::unparseable) {
            ok = false; detail << "unparseable expected at case " << i; break;
        }
    }
    report("criterion 5: reward property suite", ok,
           ok ? std::to_string(checked) + " randomized cases + 4 worked examples"
              : detail.str());
}

// ---------------------------------------------------------------- criterion 6

std::vector<data::Puzzle> eval_corpus() {
    std::vector<data::Puzzle> out;
    const int ratings[] = {900, 1300, 1900, 2500};
    int serial = 0;
    for (const auto& theme : eval::default_theme_labels())
        for (int i = 0; i < 35; ++i)
            out.push_back(testsup::make_puzzle("ev" + std::to_string(serial++),
                                               {theme, "filler"}, ratings[i % 4], serial % 2));
    for (int i = 0; i < 400; ++i)
        out.push_back(testsup::make_puzzle("ev" + std::to_string(serial++), {"opening"},
                                           ratings[i % 4], serial % 2));
    return out;
}

void criterion_6_eval_protocol() {
    setenv("CDK_TEST_API_KEY", "dummy", 1);
    bool ok = true;
    std::ostringstream detail;
    try {
        auto puzzles = eval_corpus();
        std::unordered_set<std::string> train_ids = {"ev0", "ev1", "ev2", "ev3"};
        eval::EvalConfig cfg;
        cfg.seed = 17;
        auto [themes, levels] = eval::build_test_splits(puzzles, train_ids, cfg);

        std::set<std::string> ids;
        size_t theme_total = 0;
        size_t level_total = 0;
        for (const auto& cell : themes.cells) {
            if (cell.puzzles.size() != 25) ok = false;
            for (const auto& p : cell.puzzles) {
                ids.insert(p.id);
                ++theme_total;
                if (train_ids.count(p.id)) ok = false;
            }
        }
        for (const auto& cell : levels.cells) {
            if (cell.puzzles.size() != 100) ok = false;
            for (const auto& p : cell.puzzles) {
                ids.insert(p.id);
                ++level_total;
            }
        }
        if (themes.cells.size() != 20 || levels.cells.size() != 4) ok = false;
        if (theme_total != 500 || level_total != 400 || ids.size() != 900) {
            ok = false;
            detail << "composition " << theme_total << "+" << level_total << ", unique "
                   << ids.size() << "; ";
        }

        llm::TeacherConfig endpoint;
        endpoint.api_key_env = "CDK_TEST_API_KEY";
        endpoint.model_name = "oracle-mock";
        endpoint.max_concurrency = 8;
        endpoint.request_timeout_s = 30;

        {
            testsup::MockChatServer oracle(testsup::oracle_responder(puzzles));
            endpoint.base_url = oracle.base_url();
            auto items = eval::run_queries(endpoint, {&themes, &levels}, {});
            auto report_data = eval::build_report("oracle-mock", cfg, items);
            if (report_data.avg_accuracy != 100.0 || report_data.theme_split_accuracy != 100.0)
                ok = false;
            for (const auto& cell : report_data.theme_cells)
                if (cell.accuracy != 100.0) { ok = false; detail << cell.label << "!=100; "; }
            for (const auto& cell : report_data.level_cells)
                if (cell.accuracy != 100.0) { ok = false; detail << cell.label << "!=100; "; }
        }
        {
            testsup::MockChatServer wrong(
                [](const std::string&) { return std::string("FINAL_ANSWER: a1a1"); });
            endpoint.base_url = wrong.base_url();
            auto items = eval::run_queries(endpoint, {&themes, &levels}, {});
            auto report_data = eval::build_report("wrong-mock", cfg, items);
            if (report_data.avg_accuracy != 0.0) { ok = false; detail << "wrong-mock avg != 0; "; }
            for (const auto& cell : report_data.theme_cells)
                if (cell.accuracy != 0.0) ok = false;
        }
    } catch (const Error& e) {
        ok = false;
        detail << e.what();
    }
    report("criterion 6: evaluation-protocol identity (900 puzzles, oracle + wrong mocks)", ok,
           ok ? "20x25 + 4x100, ids unique and train-disjoint; oracle 100.0 everywhere, constant-wrong 0.0"
              : detail.str());
}

// ---------------------------------------------------------------- criterion 7

void criterion_7_validator_golden() {
    struct Labeled {
        const char* name;
        std::string trace;
        std::vector<std::string> themes;
        const char* expected; // dataset answer
        bool accept;
    };

    auto prose = [](int sentences) {
        std::string out;
        for (int i = 0; i < sentences; ++i)
            out += "The rook on e1 controls square number " + std::to_string(i) + ". ";
        return out;
    };

    std::vector<Labeled> cases;
    auto add = [&](const char* name, std::string trace, std::vector<std::string> themes,
                   bool accept, const char* expected = "e1e8") {
        cases.push_back(Labeled{name, std::move(trace), std::move(themes), expected, accept});
    };

    // accepts across the band
    add("accept_4_sentences", prose(4) + "\nFINAL_ANSWER: e1e8", {"crushing"}, true);
    add("accept_6_sentences", prose(6) + "\nFINAL_ANSWER: e1e8", {"crushing"}, true);
    add("accept_10_sentences", prose(10) + "\nFINAL_ANSWER: e1e8", {"crushing"}, true);
    add("accept_mate_in_one_terse",
        "The rook lands on e8. The king has no flight square.\nFINAL_ANSWER: e1e8",
        {"mateIn1"}, true);
    add("accept_notation_clarified",
        "Re8+ (rook to e8 with check) decides. The back rank is bare. No piece can block. "
        "The game ends.\nFINAL_ANSWER: e1e8",
        {"crushing"}, true);
    add("reject_two_markers_even_if_last_correct",
        prose(5) + "\nFINAL_ANSWER: a1a2\nFINAL_ANSWER: e1e8", {"crushing"},
        false); // duplication is a rejection in SFT validation
    add("accept_case_and_punct", prose(4) + "\nFINAL_ANSWER: E1E8.", {"crushing"}, true);
    add("accept_ungrounded_token_soft",
        "The try h7h5 goes nowhere. The rook owns the file. The king sits badly. The rank "
        "falls.\nFINAL_ANSWER: e1e8",
        {"crushing"}, true);
    add("accept_mate_word_when_not_a_theme", prose(3) + "Checkmate follows at once.\nFINAL_ANSWER: e1e8",
        {"crushing"}, true);
    add("accept_band_edge_low", prose(4) + "\nFINAL_ANSWER: e1e8", {"opening"}, true);
    add("accept_band_edge_high", prose(10) + "\nFINAL_ANSWER: e1e8", {"opening"}, true);
    add("accept_numbered_moves",
        "After 1. e4 the plan is clear. The file opens fast. The rook enters. The rank is "
        "weak.\nFINAL_ANSWER: e1e8",
        {"crushing"}, true);

    // rejects: style
    add("reject_i_notice", "I notice the knight is loose. " + prose(4) + "\nFINAL_ANSWER: e1e8",
        {"crushing"}, false);
    add("reject_i_see", "I see a mate pattern. " + prose(4) + "\nFINAL_ANSWER: e1e8",
        {"crushing"}, false);
    add("reject_i_was_given", "I was given this puzzle. " + prose(4) + "\nFINAL_ANSWER: e1e8",
        {"crushing"}, false);
    add("reject_solution_provided",
        "The solution provided is forced. " + prose(4) + "\nFINAL_ANSWER: e1e8", {"crushing"},
        false);
    add("reject_engine_score", "The engine score is +9. " + prose(4) + "\nFINAL_ANSWER: e1e8",
        {"crushing"}, false);
    add("reject_centipawn", "White is 300 centipawns up. " + prose(4) + "\nFINAL_ANSWER: e1e8",
        {"crushing"}, false);
    add("reject_stockfish", "Stockfish confirms this. " + prose(4) + "\nFINAL_ANSWER: e1e8",
        {"crushing"}, false);
    add("reject_rating_word", "The rating of this puzzle is high. " + prose(4) +
                                  "\nFINAL_ANSWER: e1e8",
        {"crushing"}, false);
    add("reject_theme_tag", "A classic backRankMate finish. " + prose(4) + "\nFINAL_ANSWER: e1e8",
        {"backRankMate"}, false);
    add("reject_theme_phrase", "A classic back rank mate finish. " + prose(4) +
                                   "\nFINAL_ANSWER: e1e8",
        {"backRankMate"}, false);
    add("reject_theme_word_mate", "It is mate on the spot. " + prose(4) + "\nFINAL_ANSWER: e1e8",
        {"mate"}, false);

    // rejects: band
    add("reject_3_sentences", prose(3) + "\nFINAL_ANSWER: e1e8", {"crushing"}, false);
    add("reject_11_sentences", prose(11) + "\nFINAL_ANSWER: e1e8", {"crushing"}, false);
    add("reject_1_sentence_mate_in_one", "The rook mates.\nFINAL_ANSWER: e1e8", {"mateIn1"},
        false);
    add("reject_empty", "", {"crushing"}, false);

    // rejects: marker and answer
    add("reject_no_marker", prose(5), {"crushing"}, false);
    add("reject_san_answer", prose(5) + "\nFINAL_ANSWER: Re8", {"crushing"}, false);
    add("reject_wrong_answer", prose(5) + "\nFINAL_ANSWER: e1e7", {"crushing"}, false);
    add("reject_duplicate_marker",
        prose(5) + "\nFINAL_ANSWER: e1e8\nFINAL_ANSWER: e1e8", {"crushing"}, false);
    add("reject_marker_mid_line", prose(5) + " and so FINAL_ANSWER: e1e8 stands.", {"crushing"},
        false);

    // boundary: "generating" must not trip "rating"
    add("accept_generating_is_not_rating",
        "White is generating threats. The file belongs to the rook. The rank is weak. The "
        "king is stuck.\nFINAL_ANSWER: e1e8",
        {"crushing"}, true);

    int wrong = 0;
    std::ostringstream detail;
    for (const auto& c : cases) {
        auto puzzle = testsup::make_puzzle("golden", c.themes, 1500, 0);
        auto report_data =
            trace::validate_trace(c.trace, puzzle, chess::Move::parse(c.expected));
        if (report_data.accepted != c.accept) {
            ++wrong;
            detail << c.name << " classified " << (report_data.accepted ? "accept" : "reject")
                   << "; ";
        }
    }
    report("criterion 7: trace-validator golden suite (" + std::to_string(cases.size()) +
               " labeled traces)",
           wrong == 0, wrong == 0 ? "all classified as labeled" : detail.str());
}

// ---------------------------------------------------------------- criterion 8

void criterion_8_report_format() {
    // The paper's trained-model accuracies (e.g. 48.1% Avg Acc / 178 Avg
    // Tokens for the 4B model) need GPU training runs and are out of scope at
    // desk scale; what is reproduced here is the metric pipeline (criteria 5
    // and 6) and the report format, byte-exact against the golden files.
    bool ok = true;
    std::ostringstream detail;

    eval::EvalConfig cfg;
    std::vector<eval::ItemRecord> items;
    int k = 0;
    auto add_item = [&](const std::string& split, const std::string& cell, double reward_value,
                        long tokens) {
        eval::ItemRecord item;
        item.puzzle_id = "p" + std::to_string(items.size());
        item.split = split;
        item.cell = cell;
        item.expected = "e1e8";
        item.completion = std::string("FINAL_ANSWER: ") + (reward_value == 1.0 ? "e1e8" : "a2a3");
        item.predicted = reward_value == 1.0 ? "e1e8" : "a2a3";
        item.reward = reward_value;
        item.reason = reward_value == 1.0 ? "exact_match" : "wrong_move";
        item.completion_tokens = tokens;
        item.latency_ms = 12.0;
        items.push_back(item);
    };
    for (const auto& band : cfg.level_bands)
        for (int i = 0; i < 4; ++i) add_item("level", band.label, (k++ % 2) ? 1.0 : 0.0, 100 + k);
    for (const auto& label : cfg.theme_labels)
        for (int i = 0; i < 2; ++i) add_item("theme", label, (k++ % 4) ? 1.0 : 0.0, 200 + k);

    auto report_data = eval::build_report("demo-model", cfg, items);
    report_data.config_hash = "deadbeef";
    report_data.toolkit_version = "0.1.0";

    std::string text = eval::render_report_text(report_data);
    std::string json_text = eval::render_report_json(report_data).dump(2) + "\n";
    std::string golden_dir = CDK_GOLDEN_DIR;
    try {
        if (util::read_file(golden_dir + "/eval_report.txt") != text) {
            ok = false;
            detail << "report.txt differs from golden; ";
        }
        if (util::read_file(golden_dir + "/eval_report.json") != json_text) {
            ok = false;
            detail << "report.json differs from golden; ";
        }
    } catch (const Error& e) {
        ok = false;
        detail << e.what();
    }
    report("criterion 8: trained-model accuracies out of scope; report format byte-exact",
           ok,
           ok ? "Table-1/Table-8 layouts match golden files; model accuracy reproduction "
                "requires GPU training (explicitly out of scope)"
              : detail.str());
}

} // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1_perft();
    criterion_2_example_puzzle();
    criterion_3_algorithm1();
    criterion_4_dump_statistics();
    criterion_5_reward_properties();
    criterion_6_eval_protocol();
    criterion_7_validator_golden();
    criterion_8_report_format();
    std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
              << std::fixed << std::setprecision(1) << seconds_since(t0) << "s)" << std::endl;
    return g_failures == 0 ? 0 : 1;
}
