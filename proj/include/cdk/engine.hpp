#pragma once

#include "cdk/chess.hpp"
#include "cdk/puzzle.hpp"
#include "cdk/util.hpp"

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

namespace cdk::engine {

struct EngineConfig {
    std::string executable_path;
    int depth = 24;
    int multipv_k = 1;
    int threads = 1;
    int hash_mb = 64;
    std::chrono::milliseconds per_position_timeout{120000};
    std::chrono::milliseconds handshake_timeout{10000};
    int workers = 1; // engine processes in the pool
};

struct PvScore {
    bool is_mate = false;
    int value = 0; // centipawns, or signed mate distance from the mover's side

    bool operator==(const PvScore&) const = default;
};

struct PvLine {
    int rank = 1;
    std::vector<chess::Move> moves;
    PvScore score;
};

struct Analysis {
    chess::Position position;
    int depth_reached = 0;
    std::vector<PvLine> lines; // rank order, rank 1 is the engine's best line
    chess::Move best_move;     // equals lines[0].moves[0]
};

// One engine process, one UCI conversation. Not thread safe; wrap in
// EnginePool for parallel use.
class UciEngine {
public:
    // Spawns the process and completes the uci/isready handshake, applying
    // MultiPV / Threads / Hash.
    static std::unique_ptr<UciEngine> start(const EngineConfig& cfg);
    ~UciEngine();

    UciEngine(const UciEngine&) = delete;
    UciEngine& operator=(const UciEngine&) = delete;

    Analysis analyze(const chess::Position& p, int depth, int multipv);
    const std::set<std::string>& options() const { return options_; }
    const std::string& name() const { return name_; }

private:
    UciEngine() = default;
    void write_line(const std::string& line);
    // Next line before the deadline; nullopt on EOF.
    std::optional<std::string> read_line(std::chrono::steady_clock::time_point deadline,
                                         bool timeout_is_crash);
    void shutdown();

    int pid_ = -1;
    int to_engine_ = -1;
    int from_engine_ = -1;
    std::string buffer_;
    std::set<std::string> options_;
    std::string name_;
    std::chrono::milliseconds per_position_timeout_{120000};
};

struct MasterSolution {
    Analysis analysis;
    bool solution_mismatch = false; // engine best move != dataset solution
};

// Analysis at cfg.depth with cfg.multipv_k lines. mateIn1 prompt omission
// happens downstream; the analysis is always produced.
MasterSolution master_solution(UciEngine& engine, const data::Puzzle& puzzle,
                               const EngineConfig& cfg);

// Hands out one engine process per concurrent caller.
class EnginePool {
public:
    explicit EnginePool(EngineConfig cfg) : cfg_(std::move(cfg)) {}

    class Lease {
    public:
        Lease(EnginePool& pool, std::unique_ptr<UciEngine> engine)
            : pool_(&pool), engine_(std::move(engine)) {}
        ~Lease();
        Lease(Lease&&) = default;
        UciEngine& operator*() { return *engine_; }
        UciEngine* operator->() { return engine_.get(); }
        void discard() { engine_.reset(); } // drop a poisoned session

    private:
        EnginePool* pool_;
        std::unique_ptr<UciEngine> engine_;
    };

    Lease acquire();

private:
    friend class Lease;
    void release(std::unique_ptr<UciEngine> engine);

    EngineConfig cfg_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::vector<std::unique_ptr<UciEngine>> idle_;
    int live_ = 0;
};

util::ojson analysis_to_json(const std::string& puzzle_id, const Analysis& a, bool mismatch);
// Validates PV replay legality; a violation means the stored artifact is corrupt.
Analysis analysis_from_json(const util::ojson& j, bool* mismatch = nullptr,
                            std::string* puzzle_id = nullptr);

} // namespace cdk::engine
