#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cdk/engine.hpp"
#include "test_support.hpp"

#include <thread>

using namespace cdk;
using engine::EngineConfig;

namespace {

EngineConfig miniengine_config() {
    EngineConfig cfg;
    cfg.executable_path = CDK_MINIENGINE_PATH;
    cfg.depth = 6;
    cfg.per_position_timeout = std::chrono::milliseconds(30000);
    return cfg;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a cdk::Error");
    return Errc::IoFailure;
}

} // namespace

TEST_CASE("handshake applies options against a live engine") {
    auto cfg = miniengine_config();
    cfg.multipv_k = 3;
    auto engine = engine::UciEngine::start(cfg);
    CHECK(engine->options().count("MultiPV"));
    CHECK(engine->name() == "cdk-miniengine");
}

TEST_CASE("nonexistent engine path is SpawnFailure") {
    EngineConfig cfg;
    cfg.executable_path = "/nonexistent/engine";
    CHECK(code_of([&] { engine::UciEngine::start(cfg); }) == Errc::SpawnFailure);
}

TEST_CASE("an engine that never answers uciok times out") {
    // the stub stays silent without an argument... pass scenario via a wrapper
    EngineConfig cfg;
    cfg.executable_path = CDK_UCI_STUB_SILENT;
    cfg.handshake_timeout = std::chrono::milliseconds(300);
    CHECK(code_of([&] { engine::UciEngine::start(cfg); }) == Errc::HandshakeTimeout);
}

TEST_CASE("MultiPV > 1 against an engine without the option is UnsupportedOption") {
    EngineConfig cfg;
    cfg.executable_path = CDK_UCI_STUB_NO_MULTIPV;
    cfg.multipv_k = 3;
    CHECK(code_of([&] { engine::UciEngine::start(cfg); }) == Errc::UnsupportedOption);
    cfg.multipv_k = 1; // fine when only the best line is requested
    auto engine = engine::UciEngine::start(cfg);
    auto analysis = engine->analyze(chess::start_position(), 1, 1);
    CHECK(analysis.best_move.uci() == "e2e4");
}

TEST_CASE("engine crash during analysis is EngineCrashed") {
    EngineConfig cfg;
    cfg.executable_path = CDK_UCI_STUB_CRASH;
    auto engine = engine::UciEngine::start(cfg);
    CHECK(code_of([&] { engine->analyze(chess::start_position(), 4, 1); }) == Errc::EngineCrashed);
}

TEST_CASE("no bestmove before the deadline is AnalysisTimeout") {
    EngineConfig cfg;
    cfg.executable_path = CDK_UCI_STUB_NO_BESTMOVE;
    cfg.per_position_timeout = std::chrono::milliseconds(300);
    auto engine = engine::UciEngine::start(cfg);
    auto t0 = std::chrono::steady_clock::now();
    CHECK(code_of([&] { engine->analyze(chess::start_position(), 4, 1); }) ==
          Errc::AnalysisTimeout);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
}

TEST_CASE("malformed pv move is ProtocolParseError") {
    EngineConfig cfg;
    cfg.executable_path = CDK_UCI_STUB_GARBAGE;
    auto engine = engine::UciEngine::start(cfg);
    CHECK(code_of([&] { engine->analyze(chess::start_position(), 1, 1); }) ==
          Errc::ProtocolParseError);
}

TEST_CASE("bestmove disagreeing with pv line 1 is ProtocolParseError") {
    EngineConfig cfg;
    cfg.executable_path = CDK_UCI_STUB_WRONG_BESTMOVE;
    auto engine = engine::UciEngine::start(cfg);
    CHECK(code_of([&] { engine->analyze(chess::start_position(), 1, 1); }) ==
          Errc::ProtocolParseError);
}

TEST_CASE("back-rank position: best move e1e8 with mate +1") {
    auto engine = engine::UciEngine::start(miniengine_config());
    auto analysis = engine->analyze(chess::parse_fen("6k1/5ppp/8/8/8/8/8/4R1K1 w - - 0 1"), 10, 1);
    CHECK(analysis.best_move.uci() == "e1e8");
    REQUIRE(!analysis.lines.empty());
    CHECK(analysis.lines[0].score.is_mate);
    CHECK(analysis.lines[0].score.value == 1);
    CHECK(analysis.depth_reached == 10);
}

TEST_CASE("multipv analysis keeps ranks contiguous and replayable") {
    auto cfg = miniengine_config();
    cfg.multipv_k = 3;
    auto engine = engine::UciEngine::start(cfg);
    auto analysis = engine->analyze(chess::start_position(), 3, 3);
    CHECK(analysis.lines.size() <= 3);
    for (size_t i = 0; i < analysis.lines.size(); ++i) {
        CHECK(analysis.lines[i].rank == static_cast<int>(i) + 1);
        chess::Position cursor = analysis.position;
        for (const auto& m : analysis.lines[i].moves) cursor = chess::apply_move(cursor, m);
    }
    CHECK(analysis.best_move == analysis.lines[0].moves[0]);
}

TEST_CASE("fixed depth is deterministic across runs") {
    auto cfg = miniengine_config();
    auto fen = "r1bqkbnr/pppp1ppp/2n5/4p3/4P3/5N2/PPPP1PPP/RNBQKB1R w KQkq - 2 3";
    auto first = engine::UciEngine::start(cfg)->analyze(chess::parse_fen(fen), 4, 1);
    auto second = engine::UciEngine::start(cfg)->analyze(chess::parse_fen(fen), 4, 1);
    CHECK(first.best_move == second.best_move);
    CHECK(first.lines[0].score == second.lines[0].score);
}

TEST_CASE("master_solution flags dataset mismatches, analyzes mateIn1 normally") {
    auto cfg = miniengine_config();
    auto engine = engine::UciEngine::start(cfg);

    auto good = testsup::make_puzzle("g", {"mate", "mateIn1"}, 1000, 0); // e1e8 is the mate
    auto sol = engine::master_solution(*engine, good, cfg);
    CHECK(!sol.solution_mismatch);
    CHECK(sol.analysis.best_move == good.solution);
    CHECK(!sol.analysis.lines.empty()); // analysis produced; omission happens downstream

    auto bad = good;
    bad.solution = chess::Move::parse("e1e2"); // dataset says a quiet move, engine finds mate
    auto flagged = engine::master_solution(*engine, bad, cfg);
    CHECK(flagged.solution_mismatch);
}

TEST_CASE("analysis jsonl round trip validates replay") {
    auto engine = engine::UciEngine::start(miniengine_config());
    auto analysis = engine->analyze(chess::parse_fen("6k1/5ppp/8/8/8/8/8/4R1K1 w - - 0 1"), 6, 1);
    auto j = engine::analysis_to_json("pz", analysis, false);
    bool mismatch = true;
    std::string id;
    auto back = engine::analysis_from_json(j, &mismatch, &id);
    CHECK(id == "pz");
    CHECK(!mismatch);
    CHECK(back.best_move == analysis.best_move);
    CHECK(back.lines.size() == analysis.lines.size());

    auto corrupted = j;
    corrupted["lines"][0]["moves"][0] = "e1d8"; // illegal rook move
    CHECK_THROWS_AS(engine::analysis_from_json(corrupted), Error);
}

TEST_CASE("engine pool hands sessions to parallel workers") {
    auto cfg = miniengine_config();
    cfg.workers = 2;
    engine::EnginePool pool(cfg);
    std::atomic<int> solved{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 6; ++i)
        threads.emplace_back([&] {
            auto lease = pool.acquire();
            auto analysis = lease->analyze(chess::parse_fen("6k1/5ppp/8/8/8/8/8/4R1K1 w - - 0 1"),
                                           4, 1);
            if (analysis.best_move.uci() == "e1e8") ++solved;
        });
    for (auto& t : threads) t.join();
    CHECK(solved == 6);
}
