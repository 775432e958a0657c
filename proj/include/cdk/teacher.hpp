#pragma once

#include "cdk/engine.hpp"
#include "cdk/prompt.hpp"
#include "cdk/puzzle.hpp"
#include "cdk/util.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdk::llm {

struct RetryPolicy {
    int max_attempts = 4;
    int base_backoff_ms = 250;
    double jitter = 0.25; // fraction of the current backoff, in [0, 1]
};

struct TeacherConfig {
    std::string base_url;                          // e.g. https://openrouter.ai/api/v1
    std::string api_key_env = "OPENROUTER_API_KEY"; // env var NAME; value never persisted
    std::string model_name;
    double temperature = 0.7;
    int max_output_tokens = 1024;
    int max_concurrency = 4;
    RetryPolicy retry;
    std::string cache_dir; // empty disables caching
    int request_timeout_s = 120;
};

struct Usage {
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens; // absent when the provider omits usage
};

struct Completion {
    std::string text;
    Usage usage;
};

// One chat completion. Transient failures (429, 5xx, transport errors)
// retried with exponential backoff + jitter; 401/403 aborts immediately.
Completion complete(const TeacherConfig& cfg, const std::string& prompt);

struct DistillationRecord {
    std::string puzzle_id;
    std::string prompt;
    std::string trace;
    Usage usage;
    std::string teacher_model;
    std::string variant; // pv mode + flags, for provenance
    bool from_cache = false;
    bool ok = false;
    std::string error;
};

// Builds the distillation prompt per puzzle, consults the cache
// (key = sha256(model, prompt bytes)), and fans out with at most
// max_concurrency requests in flight. Records come back in input order;
// one item failing never aborts the batch.
std::vector<DistillationRecord> batch_distill(
    const TeacherConfig& cfg, const std::vector<data::Puzzle>& puzzles,
    const std::map<std::string, engine::Analysis>& analyses_by_id,
    const prompt::PromptVariant& variant);

std::string resolve_api_key(const TeacherConfig& cfg); // throws AuthConfigMissing
std::string cache_key(const std::string& model_name, const std::string& prompt);
std::string variant_tag(const prompt::PromptVariant& variant);

util::ojson distill_record_to_json(const DistillationRecord& r);
DistillationRecord distill_record_from_json(const util::ojson& j);

} // namespace cdk::llm
