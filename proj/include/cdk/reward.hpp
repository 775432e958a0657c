#pragma once

#include "cdk/chess.hpp"

#include <memory>
#include <string>
#include <string_view>

namespace cdk::reward {

struct RewardConfig {
    double eta = 0.0;           // partial credit; 0 = pure binary
    bool require_marker = true; // false: fall back to the last UCI-shaped token
};

enum class Reason {
    exact_match,
    partial_source,
    partial_dest,
    wrong_move,
    no_marker,
    unparseable,
};

const char* reason_name(Reason r);

struct RewardOutcome {
    double reward = 0.0;
    Reason reason = Reason::wrong_move;
};

// Total function over completions: extraction failures score 0 with the
// matching reason. Exact match on the normalized move -> 1; with eta > 0 a
// shared source square -> (eta, partial_source), else a shared destination
// -> (eta, partial_dest). Legality in the position is deliberately not
// consulted.
RewardOutcome score(std::string_view completion, const chess::Move& expected,
                    const RewardConfig& cfg = {});

// Parses `expected_uci` first (throws BadUciMove on garbage).
RewardOutcome score(std::string_view completion, std::string_view expected_uci,
                    const RewardConfig& cfg = {});

// Stateless batch endpoint for RL trainers:
//   POST /v1/reward  {"items":[{"completion":"...","expected":"e2e4"}, ...]}
//     -> {"results":[{"reward":1.0,"reason":"exact_match"}, ...]} in order;
//        per-item {"error":"invalid_expected"|"invalid_item"} entries
//   GET /healthz -> 200
// Malformed JSON bodies get a 400.
class RewardService {
public:
    explicit RewardService(RewardConfig cfg);
    ~RewardService();

    // Binds and serves on a background thread. port 0 picks a free port.
    void start(const std::string& host, int port);
    int port() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace cdk::reward
