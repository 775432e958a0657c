#include "cdk/engine.hpp"
#include "cdk/errors.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <map>

namespace cdk::engine {

using chess::Move;
using chess::Position;

namespace {

struct ParsedInfo {
    int depth = 0;
    int multipv = 1;
    PvScore score;
    std::vector<Move> moves;
    bool usable = false;
};

ParsedInfo parse_info_line(const std::string& line) {
    ParsedInfo info;
    auto tokens = util::split_ws(line);
    if (tokens.empty() || tokens[0] != "info") return info;
    bool have_score = false;
    bool have_pv = false;
    for (size_t i = 1; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        if (t == "depth" && i + 1 < tokens.size()) {
            info.depth = std::atoi(tokens[++i].c_str());
        } else if (t == "multipv" && i + 1 < tokens.size()) {
            info.multipv = std::atoi(tokens[++i].c_str());
        } else if (t == "score" && i + 2 < tokens.size()) {
            const std::string& kind = tokens[i + 1];
            if (kind != "cp" && kind != "mate")
                fail(Errc::ProtocolParseError, "bad score kind in: " + line);
            info.score.is_mate = kind == "mate";
            info.score.value = std::atoi(tokens[i + 2].c_str());
            have_score = true;
            i += 2;
        } else if (t == "upperbound" || t == "lowerbound") {
            return ParsedInfo{}; // bound lines are not final results
        } else if (t == "pv") {
            for (size_t k = i + 1; k < tokens.size(); ++k) {
                auto m = Move::try_parse(tokens[k]);
                if (!m) fail(Errc::ProtocolParseError, "bad pv move '" + tokens[k] + "' in: " + line);
                info.moves.push_back(*m);
            }
            have_pv = !info.moves.empty();
            break;
        }
    }
    info.usable = have_score && have_pv && info.depth > 0;
    return info;
}

void validate_replay(const Position& p, const std::vector<Move>& moves) {
    Position cursor = p;
    for (const Move& m : moves) {
        try {
            cursor = chess::apply_move(cursor, m);
        } catch (const Error&) {
            fail(Errc::ProtocolParseError, "pv move " + m.uci() + " is illegal on replay");
        }
    }
}

} // namespace

std::unique_ptr<UciEngine> UciEngine::start(const EngineConfig& cfg) {
    if (access(cfg.executable_path.c_str(), X_OK) != 0)
        fail(Errc::SpawnFailure, cfg.executable_path + ": " + std::strerror(errno));

    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0 || pipe(from_child) != 0)
        fail(Errc::SpawnFailure, std::string("pipe: ") + std::strerror(errno));

    pid_t pid = fork();
    if (pid < 0) fail(Errc::SpawnFailure, std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        execl(cfg.executable_path.c_str(), cfg.executable_path.c_str(), (char*)nullptr);
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);

    auto engine = std::unique_ptr<UciEngine>(new UciEngine());
    engine->pid_ = pid;
    engine->to_engine_ = to_child[1];
    engine->from_engine_ = from_child[0];
    engine->per_position_timeout_ = cfg.per_position_timeout;
    signal(SIGPIPE, SIG_IGN);

    auto deadline = std::chrono::steady_clock::now() + cfg.handshake_timeout;
    engine->write_line("uci");
    while (true) {
        auto line = engine->read_line(deadline, false);
        if (!line) fail(Errc::SpawnFailure, "engine exited before uciok");
        auto tokens = util::split_ws(*line);
        if (tokens.empty()) continue;
        if (tokens[0] == "uciok") break;
        if (tokens.size() >= 3 && tokens[0] == "id" && tokens[1] == "name") {
            engine->name_ = util::trim(line->substr(line->find("name") + 5));
        } else if (tokens.size() >= 3 && tokens[0] == "option" && tokens[1] == "name") {
            // option name <Name...> type ...
            std::string name;
            for (size_t i = 2; i < tokens.size() && tokens[i] != "type"; ++i) {
                if (!name.empty()) name += ' ';
                name += tokens[i];
            }
            engine->options_.insert(name);
        }
    }

    auto set_option = [&](const std::string& name, int value, bool required) {
        if (!engine->options_.count(name)) {
            if (required)
                fail(Errc::UnsupportedOption, "engine does not declare option " + name);
            return;
        }
        engine->write_line("setoption name " + name + " value " + std::to_string(value));
    };
    // MultiPV is load-bearing; Threads/Hash are tuning and may be undeclared
    // by small engines.
    set_option("MultiPV", cfg.multipv_k, cfg.multipv_k > 1);
    set_option("Threads", cfg.threads, false);
    set_option("Hash", cfg.hash_mb, false);

    engine->write_line("isready");
    while (true) {
        auto line = engine->read_line(deadline, false);
        if (!line) fail(Errc::SpawnFailure, "engine exited before readyok");
        if (util::trim(*line) == "readyok") break;
    }
    return engine;
}

UciEngine::~UciEngine() { shutdown(); }

void UciEngine::shutdown() {
    if (pid_ < 0) return;
    if (to_engine_ >= 0) {
        std::string quit = "quit\n";
        ssize_t ignored = write(to_engine_, quit.data(), quit.size());
        (void)ignored;
        close(to_engine_);
        to_engine_ = -1;
    }
    if (from_engine_ >= 0) {
        close(from_engine_);
        from_engine_ = -1;
    }
    // Grace period, then force.
    for (int i = 0; i < 50; ++i) {
        int status = 0;
        if (waitpid(pid_, &status, WNOHANG) == pid_) {
            pid_ = -1;
            return;
        }
        usleep(10000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
}

void UciEngine::write_line(const std::string& line) {
    std::string data = line + "\n";
    size_t off = 0;
    while (off < data.size()) {
        ssize_t n = write(to_engine_, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(Errc::EngineCrashed, std::string("write: ") + std::strerror(errno));
        }
        off += static_cast<size_t>(n);
    }
}

std::optional<std::string> UciEngine::read_line(std::chrono::steady_clock::time_point deadline,
                                                bool timeout_is_crash) {
    while (true) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            shutdown();
            fail(timeout_is_crash ? Errc::AnalysisTimeout : Errc::HandshakeTimeout,
                 "engine did not answer in time");
        }
        auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
        struct pollfd pfd = {from_engine_, POLLIN, 0};
        int r = poll(&pfd, 1, static_cast<int>(std::min<long long>(wait_ms.count(), 200)));
        if (r < 0) {
            if (errno == EINTR) continue;
            fail(Errc::EngineCrashed, std::string("poll: ") + std::strerror(errno));
        }
        if (r == 0) continue;
        char chunk[4096];
        ssize_t n = read(from_engine_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(Errc::EngineCrashed, std::string("read: ") + std::strerror(errno));
        }
        if (n == 0) return std::nullopt; // EOF
        buffer_.append(chunk, static_cast<size_t>(n));
    }
}

Analysis UciEngine::analyze(const Position& p, int depth, int multipv) {
    if (chess::legal_moves(p).empty())
        fail(Errc::ProtocolParseError, "position has no legal moves: " + chess::format_fen(p));

    write_line("position fen " + chess::format_fen(p));
    write_line("go depth " + std::to_string(depth));

    auto deadline = std::chrono::steady_clock::now() + per_position_timeout_;
    std::map<int, ParsedInfo> best_per_rank;
    std::optional<Move> best_move;
    while (true) {
        auto line = read_line(deadline, true);
        if (!line) fail(Errc::EngineCrashed, "engine closed its pipe during analysis");
        auto tokens = util::split_ws(*line);
        if (tokens.empty()) continue;
        if (tokens[0] == "bestmove") {
            if (tokens.size() < 2) fail(Errc::ProtocolParseError, "bare bestmove line");
            auto m = Move::try_parse(tokens[1]);
            if (!m) fail(Errc::ProtocolParseError, "bad bestmove '" + tokens[1] + "'");
            best_move = *m;
            break;
        }
        if (tokens[0] == "info") {
            ParsedInfo info = parse_info_line(*line);
            if (!info.usable) continue;
            auto it = best_per_rank.find(info.multipv);
            // Iterative deepening: the last line at the deepest depth wins.
            if (it == best_per_rank.end() || info.depth >= it->second.depth)
                best_per_rank[info.multipv] = std::move(info);
        }
    }

    if (best_per_rank.empty())
        fail(Errc::ProtocolParseError, "no usable info lines before bestmove");

    Analysis analysis;
    analysis.position = p;
    int expected_rank = 1;
    for (const auto& [rank, info] : best_per_rank) {
        if (rank != expected_rank)
            fail(Errc::ProtocolParseError, "multipv ranks not contiguous at " + std::to_string(rank));
        ++expected_rank;
        if (rank > multipv) break;
        validate_replay(p, info.moves);
        analysis.lines.push_back(PvLine{rank, info.moves, info.score});
        analysis.depth_reached = std::max(analysis.depth_reached, info.depth);
    }
    if (!best_move || analysis.lines.empty())
        fail(Errc::ProtocolParseError, "engine produced no lines");
    if (analysis.lines[0].moves[0] != *best_move)
        fail(Errc::ProtocolParseError, "bestmove " + best_move->uci() +
                                           " disagrees with pv line 1 (" +
                                           analysis.lines[0].moves[0].uci() + ")");
    analysis.best_move = *best_move;
    return analysis;
}

MasterSolution master_solution(UciEngine& engine, const data::Puzzle& puzzle,
                               const EngineConfig& cfg) {
    MasterSolution out;
    out.analysis = engine.analyze(puzzle.position, cfg.depth, cfg.multipv_k);
    out.solution_mismatch = out.analysis.best_move != puzzle.solution;
    return out;
}

EnginePool::Lease EnginePool::acquire() {
    std::unique_lock lock(mu_);
    while (true) {
        if (!idle_.empty()) {
            auto engine = std::move(idle_.back());
            idle_.pop_back();
            return Lease(*this, std::move(engine));
        }
        if (live_ < cfg_.workers) {
            ++live_;
            lock.unlock();
            try {
                return Lease(*this, UciEngine::start(cfg_));
            } catch (...) {
                std::lock_guard relock(mu_);
                --live_;
                cv_.notify_one();
                throw;
            }
        }
        cv_.wait(lock);
    }
}

void EnginePool::release(std::unique_ptr<UciEngine> engine) {
    std::lock_guard lock(mu_);
    if (engine) {
        idle_.push_back(std::move(engine));
    } else {
        --live_; // discarded: a fresh process may be spawned in its place
    }
    cv_.notify_one();
}

EnginePool::Lease::~Lease() {
    if (pool_) pool_->release(std::move(engine_));
}

util::ojson analysis_to_json(const std::string& puzzle_id, const Analysis& a, bool mismatch) {
    util::ojson j;
    j["puzzle_id"] = puzzle_id;
    j["fen"] = chess::format_fen(a.position);
    j["depth"] = a.depth_reached;
    j["best_move"] = a.best_move.uci();
    j["mismatch"] = mismatch;
    util::ojson lines = util::ojson::array();
    for (const auto& line : a.lines) {
        util::ojson l;
        l["rank"] = line.rank;
        l["kind"] = line.score.is_mate ? "mate" : "cp";
        l["value"] = line.score.value;
        std::vector<std::string> moves;
        for (const auto& m : line.moves) moves.push_back(m.uci());
        l["moves"] = moves;
        lines.push_back(std::move(l));
    }
    j["lines"] = std::move(lines);
    return j;
}

Analysis analysis_from_json(const util::ojson& j, bool* mismatch, std::string* puzzle_id) {
    Analysis a;
    a.position = chess::parse_fen(j.at("fen").get<std::string>());
    a.depth_reached = j.at("depth").get<int>();
    a.best_move = Move::parse(j.at("best_move").get<std::string>());
    if (mismatch) *mismatch = j.at("mismatch").get<bool>();
    if (puzzle_id) *puzzle_id = j.at("puzzle_id").get<std::string>();
    for (const auto& l : j.at("lines")) {
        PvLine line;
        line.rank = l.at("rank").get<int>();
        line.score.is_mate = l.at("kind").get<std::string>() == "mate";
        line.score.value = l.at("value").get<int>();
        for (const auto& u : l.at("moves")) line.moves.push_back(Move::parse(u.get<std::string>()));
        validate_replay(a.position, line.moves);
        a.lines.push_back(std::move(line));
    }
    if (a.lines.empty() || a.lines[0].moves[0] != a.best_move)
        fail(Errc::ProtocolParseError, "stored analysis is inconsistent");
    return a;
}

} // namespace cdk::engine
