#include "cdk/reward.hpp"
#include "cdk/errors.hpp"
#include "cdk/util.hpp"
#include "cdk/validate.hpp"

#include <httplib.h>

#include <thread>

namespace cdk::reward {

using chess::Move;

const char* reason_name(Reason r) {
    switch (r) {
    case Reason::exact_match: return "exact_match";
    case Reason::partial_source: return "partial_source";
    case Reason::partial_dest: return "partial_dest";
    case Reason::wrong_move: return "wrong_move";
    case Reason::no_marker: return "no_marker";
    case Reason::unparseable: return "unparseable";
    }
    return "?";
}

namespace {

std::optional<Move> last_uci_shaped_token(std::string_view text) {
    std::optional<Move> last;
    for (const auto& word : util::split_ws(text)) {
        auto m = Move::try_parse(util::to_lower(word));
        if (m) last = m;
    }
    return last;
}

} // namespace

RewardOutcome score(std::string_view completion, const Move& expected, const RewardConfig& cfg) {
    std::optional<Move> predicted;
    try {
        predicted = trace::extract_final_answer(completion);
    } catch (const Error& e) {
        if (e.code() != Errc::NoMarker) return {0.0, Reason::unparseable};
        if (!cfg.require_marker) predicted = last_uci_shaped_token(completion);
        if (!predicted) return {0.0, Reason::no_marker};
    }
    if (*predicted == expected) return {1.0, Reason::exact_match};
    if (cfg.eta > 0.0) {
        if (predicted->from == expected.from) return {cfg.eta, Reason::partial_source};
        if (predicted->to == expected.to) return {cfg.eta, Reason::partial_dest};
    }
    return {0.0, Reason::wrong_move};
}

RewardOutcome score(std::string_view completion, std::string_view expected_uci,
                    const RewardConfig& cfg) {
    return score(completion, Move::parse(util::to_lower(expected_uci)), cfg);
}

struct RewardService::Impl {
    RewardConfig cfg;
    httplib::Server server;
    std::thread thread;
    int port = 0;
};

RewardService::RewardService(RewardConfig cfg) : impl_(std::make_unique<Impl>()) {
    impl_->cfg = cfg;

    impl_->server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });

    impl_->server.Post("/v1/reward", [this](const httplib::Request& req, httplib::Response& res) {
        auto body = util::json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("items") ||
            !body["items"].is_array()) {
            res.status = 400;
            res.set_content(R"({"error":"malformed request"})", "application/json");
            return;
        }
        util::ojson results = util::ojson::array();
        for (const auto& item : body["items"]) {
            if (!item.is_object() || !item.contains("completion") ||
                !item["completion"].is_string() || !item.contains("expected") ||
                !item["expected"].is_string()) {
                results.push_back(util::ojson{{"error", "invalid_item"}});
                continue;
            }
            auto expected = Move::try_parse(util::to_lower(item["expected"].get<std::string>()));
            if (!expected) {
                results.push_back(util::ojson{{"error", "invalid_expected"}});
                continue;
            }
            RewardOutcome outcome = score(item["completion"].get<std::string>(), *expected,
                                          impl_->cfg);
            util::ojson r;
            r["reward"] = outcome.reward;
            r["reason"] = reason_name(outcome.reason);
            results.push_back(std::move(r));
        }
        util::ojson out;
        out["results"] = std::move(results);
        res.set_content(out.dump(), "application/json");
    });
}

RewardService::~RewardService() { stop(); }

void RewardService::start(const std::string& host, int port) {
    if (port == 0) {
        impl_->port = impl_->server.bind_to_any_port(host);
    } else {
        if (!impl_->server.bind_to_port(host, port))
            fail(Errc::IoFailure, "cannot bind " + host + ":" + std::to_string(port));
        impl_->port = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

int RewardService::port() const { return impl_->port; }

void RewardService::stop() {
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

} // namespace cdk::reward
