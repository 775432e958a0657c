#pragma once

#include "cdk/engine.hpp"
#include "cdk/eval.hpp"
#include "cdk/prompt.hpp"
#include "cdk/reward.hpp"
#include "cdk/sampler.hpp"
#include "cdk/teacher.hpp"
#include "cdk/util.hpp"

#include <map>
#include <optional>
#include <string>

namespace cdk::cfg {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct Paths {
    std::string csv;              // Lichess puzzle CSV
    std::string work_dir = "out"; // stage artifacts
    std::string cache_dir;        // teacher cache; defaults to <work_dir>/cache
};

struct PipelineConfig {
    Paths paths;
    engine::EngineConfig engine;
    sample::SamplerConfig sampler;
    prompt::PromptVariant prompt = prompt::PromptVariant::distill_best_move();
    llm::TeacherConfig teacher;
    reward::RewardConfig reward;
    eval::EvalConfig eval;
    llm::TeacherConfig eval_endpoint; // model under evaluation
};

// Defaults tree; doubles as the schema for strict unknown-key checking.
util::ojson default_config_json();

// Precedence: flags > environment > file > defaults. The environment map is
// the documented CHESSDISTILL_* subset; flag overrides arrive as a partial
// tree from the CLI. Unknown or mis-typed keys are errors, never ignored.
PipelineConfig load_config(const std::optional<std::string>& file_path,
                           const std::map<std::string, std::string>& env,
                           const util::ojson& flag_overrides);

// The same merge, starting from an explicit resolved tree (used by tests).
PipelineConfig config_from_json(const util::ojson& resolved);

// Fully-resolved echo; contains env-var NAMES, never secret values.
util::ojson config_to_json(const PipelineConfig& cfg);

std::string config_hash(const PipelineConfig& cfg);

// Documented environment keys -> config paths.
const std::map<std::string, std::string>& env_key_map();

} // namespace cdk::cfg
