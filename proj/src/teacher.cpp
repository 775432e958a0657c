#include "cdk/teacher.hpp"
#include "cdk/errors.hpp"

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <random>
#include <thread>

namespace cdk::llm {

namespace fs = std::filesystem;

std::string resolve_api_key(const TeacherConfig& cfg) {
    if (cfg.api_key_env.empty()) return "";
    const char* value = std::getenv(cfg.api_key_env.c_str());
    if (!value || !*value)
        fail(Errc::AuthConfigMissing,
             "environment variable " + cfg.api_key_env + " is not set");
    return value;
}

std::string cache_key(const std::string& model_name, const std::string& prompt) {
    return util::sha256_hex(model_name + "\n" + prompt);
}

std::string variant_tag(const prompt::PromptVariant& variant) {
    if (!variant.distill) return "solver";
    std::string tag = prompt::pv_mode_name(variant.pv_mode);
    if (!variant.include_themes) tag += "+no_themes";
    if (!variant.feigned) tag += "+no_feigned";
    return tag;
}

namespace {

std::mutex g_cache_mutex;

std::optional<Completion> cache_load(const std::string& dir, const std::string& key) {
    std::lock_guard lock(g_cache_mutex);
    fs::path path = fs::path(dir) / (key + ".json");
    if (!fs::exists(path)) return std::nullopt;
    auto j = util::json::parse(util::read_file(path.string()), nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    Completion c;
    c.text = j.value("text", "");
    if (j.contains("prompt_tokens") && j["prompt_tokens"].is_number())
        c.usage.prompt_tokens = j["prompt_tokens"].get<long>();
    if (j.contains("completion_tokens") && j["completion_tokens"].is_number())
        c.usage.completion_tokens = j["completion_tokens"].get<long>();
    return c;
}

void cache_store(const std::string& dir, const std::string& key, const std::string& model,
                 const Completion& c) {
    std::lock_guard lock(g_cache_mutex);
    fs::create_directories(dir);
    util::ojson j;
    j["model"] = model;
    j["text"] = c.text;
    if (c.usage.prompt_tokens) j["prompt_tokens"] = *c.usage.prompt_tokens;
    if (c.usage.completion_tokens) j["completion_tokens"] = *c.usage.completion_tokens;
    util::write_file((fs::path(dir) / (key + ".json")).string(), j.dump());
}

Completion parse_chat_response(const std::string& body) {
    auto j = util::json::parse(body, nullptr, false);
    if (j.is_discarded()) fail(Errc::ProviderError, "response is not JSON");
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        fail(Errc::ProviderError, "response has no choices");
    const auto& msg = j["choices"][0];
    if (!msg.contains("message") || !msg["message"].contains("content") ||
        !msg["message"]["content"].is_string())
        fail(Errc::ProviderError, "choices[0].message.content missing");
    Completion c;
    c.text = msg["message"]["content"].get<std::string>();
    if (j.contains("usage") && j["usage"].is_object()) {
        const auto& u = j["usage"];
        if (u.contains("prompt_tokens") && u["prompt_tokens"].is_number())
            c.usage.prompt_tokens = u["prompt_tokens"].get<long>();
        if (u.contains("completion_tokens") && u["completion_tokens"].is_number())
            c.usage.completion_tokens = u["completion_tokens"].get<long>();
    }
    return c;
}

int backoff_ms(const RetryPolicy& retry, int attempt) {
    double base = retry.base_backoff_ms * std::pow(2.0, attempt);
    thread_local std::mt19937_64 rng(std::random_device{}());
    double u = static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
    // base doubles every attempt and jitter <= base, so delays never decrease
    return static_cast<int>(base * (1.0 + retry.jitter * u));
}

} // namespace

Completion complete(const TeacherConfig& cfg, const std::string& prompt) {
    std::string api_key = resolve_api_key(cfg);
    auto url = util::parse_url(cfg.base_url);

    util::ojson body;
    body["model"] = cfg.model_name;
    body["messages"] = util::ojson::array({util::ojson{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = cfg.temperature;
    body["max_tokens"] = cfg.max_output_tokens;
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    std::string last_error = "transport failure";
    bool saw_rate_limit = false;
    for (int attempt = 0; attempt < cfg.retry.max_attempts; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(backoff_ms(cfg.retry, attempt - 1)));

        httplib::Client client(url.origin);
        client.set_connection_timeout(cfg.request_timeout_s, 0);
        client.set_read_timeout(cfg.request_timeout_s, 0);
        client.set_write_timeout(cfg.request_timeout_s, 0);

        auto res = client.Post(url.path + "/chat/completions", headers, payload,
                               "application/json");
        if (!res) {
            last_error = "transport: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403)
            fail(Errc::AuthFailure, "provider returned " + std::to_string(res->status));
        if (res->status == 429) {
            saw_rate_limit = true;
            last_error = "provider returned 429";
            continue;
        }
        if (res->status >= 500) {
            last_error = "provider returned " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            fail(Errc::ProviderError,
                 "provider returned " + std::to_string(res->status) + ": " + res->body);
        return parse_chat_response(res->body);
    }
    if (saw_rate_limit) fail(Errc::RateLimited, last_error + " after retries");
    fail(Errc::Timeout, last_error + " after " + std::to_string(cfg.retry.max_attempts) +
                            " attempts");
}

std::vector<DistillationRecord> batch_distill(
    const TeacherConfig& cfg, const std::vector<data::Puzzle>& puzzles,
    const std::map<std::string, engine::Analysis>& analyses_by_id,
    const prompt::PromptVariant& variant) {
    resolve_api_key(cfg); // fail before any network or thread spin-up

    std::vector<DistillationRecord> records(puzzles.size());
    std::atomic<size_t> cursor{0};
    const std::string tag = variant_tag(variant);

    auto worker = [&] {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= puzzles.size()) return;
            const auto& puzzle = puzzles[i];
            DistillationRecord& rec = records[i];
            rec.puzzle_id = puzzle.id;
            rec.teacher_model = cfg.model_name;
            rec.variant = tag;
            try {
                const engine::Analysis* analysis = nullptr;
                auto it = analyses_by_id.find(puzzle.id);
                if (it != analyses_by_id.end()) analysis = &it->second;
                rec.prompt = prompt::build_distill_prompt(puzzle, analysis, variant);

                std::string key = cache_key(cfg.model_name, rec.prompt);
                if (!cfg.cache_dir.empty()) {
                    if (auto cached = cache_load(cfg.cache_dir, key)) {
                        rec.trace = cached->text;
                        rec.usage = cached->usage;
                        rec.from_cache = true;
                        rec.ok = true;
                        continue;
                    }
                }
                Completion c = complete(cfg, rec.prompt);
                rec.trace = c.text;
                rec.usage = c.usage;
                rec.ok = true;
                if (!cfg.cache_dir.empty()) cache_store(cfg.cache_dir, key, cfg.model_name, c);
            } catch (const Error& e) {
                rec.ok = false;
                rec.error = e.what();
            }
        }
    };

    size_t n_threads = std::min<size_t>(static_cast<size_t>(std::max(cfg.max_concurrency, 1)),
                                        puzzles.size());
    std::vector<std::thread> threads;
    for (size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return records;
}

util::ojson distill_record_to_json(const DistillationRecord& r) {
    util::ojson j;
    j["puzzle_id"] = r.puzzle_id;
    j["prompt"] = r.prompt;
    j["trace"] = r.trace;
    j["prompt_tokens"] =
        r.usage.prompt_tokens ? util::ojson(*r.usage.prompt_tokens) : util::ojson(nullptr);
    j["completion_tokens"] =
        r.usage.completion_tokens ? util::ojson(*r.usage.completion_tokens) : util::ojson(nullptr);
    j["teacher_model"] = r.teacher_model;
    j["variant"] = r.variant;
    j["from_cache"] = r.from_cache;
    j["ok"] = r.ok;
    j["error"] = r.error;
    return j;
}

DistillationRecord distill_record_from_json(const util::ojson& j) {
    DistillationRecord r;
    r.puzzle_id = j.at("puzzle_id").get<std::string>();
    r.prompt = j.at("prompt").get<std::string>();
    r.trace = j.at("trace").get<std::string>();
    if (j.contains("prompt_tokens") && j["prompt_tokens"].is_number())
        r.usage.prompt_tokens = j["prompt_tokens"].get<long>();
    if (j.contains("completion_tokens") && j["completion_tokens"].is_number())
        r.usage.completion_tokens = j["completion_tokens"].get<long>();
    r.teacher_model = j.at("teacher_model").get<std::string>();
    r.variant = j.value("variant", "");
    r.from_cache = j.value("from_cache", false);
    r.ok = j.at("ok").get<bool>();
    r.error = j.value("error", "");
    return r;
}

} // namespace cdk::llm
