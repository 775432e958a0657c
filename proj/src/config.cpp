#include "cdk/config.hpp"
#include "cdk/errors.hpp"

#include <charconv>

namespace cdk::cfg {

using util::ojson;

ojson default_config_json() {
    ojson j;
    j["paths"] = {{"csv", ""}, {"work_dir", "out"}, {"cache_dir", ""}};
    j["engine"] = {{"path", ""},        {"depth", 24},   {"multipv_k", 1},
                   {"threads", 1},      {"hash_mb", 64}, {"timeout_ms", 120000},
                   {"handshake_timeout_ms", 10000},      {"workers", 1}};
    j["sampler"] = {{"strategy", "balanced"}, {"K", 50}, {"M", 800},
                    {"n", 0},                 {"seed", 0}, {"exclude_ids_file", ""}};
    j["prompt"] = {{"pv_mode", "best_move"}, {"include_themes", true}, {"feigned", true}};
    j["teacher"] = {{"base_url", ""},
                    {"api_key_env", "OPENROUTER_API_KEY"},
                    {"model", ""},
                    {"temperature", 0.7},
                    {"max_output_tokens", 1024},
                    {"max_concurrency", 4},
                    {"request_timeout_s", 120},
                    {"retry",
                     {{"max_attempts", 4}, {"base_backoff_ms", 250}, {"jitter", 0.25}}}};
    j["reward"] = {{"eta", 0.0}, {"require_marker", true}};
    j["eval"] = {{"seed", 0},
                 {"per_theme", 25},
                 {"per_level", 100},
                 {"cutoffs", {1100, 1700, 2300}},
                 {"themes", eval::default_theme_labels()},
                 {"endpoint",
                  {{"base_url", ""},
                   {"api_key_env", "OPENROUTER_API_KEY"},
                   {"model", ""},
                   {"max_concurrency", 4},
                   {"request_timeout_s", 120}}}};
    return j;
}

const std::map<std::string, std::string>& env_key_map() {
    static const std::map<std::string, std::string> keys = {
        {"CHESSDISTILL_ENGINE", "engine.path"},
        {"CHESSDISTILL_CSV", "paths.csv"},
        {"CHESSDISTILL_WORK_DIR", "paths.work_dir"},
        {"CHESSDISTILL_TEACHER_BASE_URL", "teacher.base_url"},
        {"CHESSDISTILL_TEACHER_MODEL", "teacher.model"},
        {"CHESSDISTILL_EVAL_BASE_URL", "eval.endpoint.base_url"},
        {"CHESSDISTILL_EVAL_MODEL", "eval.endpoint.model"},
    };
    return keys;
}

namespace {

// Merge `patch` into `base`, rejecting keys absent from the defaults tree and
// values whose JSON type disagrees with the default's.
void merge_strict(ojson& base, const ojson& patch, const std::string& prefix) {
    if (!patch.is_object())
        fail(Errc::ConfigParse, "expected an object at '" + (prefix.empty() ? "." : prefix) + "'");
    for (const auto& [key, value] : patch.items()) {
        std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!base.contains(key)) fail(Errc::UnknownKey, "unknown config key '" + path + "'");
        ojson& slot = base[key];
        if (slot.is_object()) {
            if (!value.is_object())
                fail(Errc::ConfigParse, "'" + path + "' must be an object");
            merge_strict(slot, value, path);
            continue;
        }
        bool type_ok = (slot.is_string() && value.is_string()) ||
                       (slot.is_boolean() && value.is_boolean()) ||
                       (slot.is_number_integer() && value.is_number_integer()) ||
                       (slot.is_number_float() && value.is_number()) ||
                       (slot.is_array() && value.is_array());
        if (!type_ok) fail(Errc::ConfigParse, "'" + path + "' has the wrong type");
        slot = value;
    }
}

void set_dotted(ojson& tree, const std::string& dotted, const ojson& value) {
    ojson* node = &tree;
    size_t start = 0;
    while (true) {
        size_t dot = dotted.find('.', start);
        std::string key = dotted.substr(start, dot - start);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

llm::TeacherConfig teacher_from_json(const ojson& j, const std::string& cache_dir) {
    llm::TeacherConfig t;
    t.base_url = j.at("base_url").get<std::string>();
    t.api_key_env = j.at("api_key_env").get<std::string>();
    t.model_name = j.at("model").get<std::string>();
    if (j.contains("temperature")) t.temperature = j.at("temperature").get<double>();
    if (j.contains("max_output_tokens"))
        t.max_output_tokens = j.at("max_output_tokens").get<int>();
    t.max_concurrency = j.at("max_concurrency").get<int>();
    t.request_timeout_s = j.at("request_timeout_s").get<int>();
    if (j.contains("retry")) {
        t.retry.max_attempts = j["retry"].at("max_attempts").get<int>();
        t.retry.base_backoff_ms = j["retry"].at("base_backoff_ms").get<int>();
        t.retry.jitter = j["retry"].at("jitter").get<double>();
        if (t.retry.jitter < 0.0 || t.retry.jitter > 1.0)
            fail(Errc::ConfigParse, "teacher.retry.jitter must lie in [0, 1]");
    }
    t.cache_dir = cache_dir;
    return t;
}

} // namespace

PipelineConfig config_from_json(const ojson& j) {
    PipelineConfig cfg;
    cfg.paths.csv = j["paths"].at("csv").get<std::string>();
    cfg.paths.work_dir = j["paths"].at("work_dir").get<std::string>();
    cfg.paths.cache_dir = j["paths"].at("cache_dir").get<std::string>();
    if (cfg.paths.cache_dir.empty()) cfg.paths.cache_dir = cfg.paths.work_dir + "/cache";

    const auto& e = j["engine"];
    cfg.engine.executable_path = e.at("path").get<std::string>();
    cfg.engine.depth = e.at("depth").get<int>();
    cfg.engine.multipv_k = e.at("multipv_k").get<int>();
    cfg.engine.threads = e.at("threads").get<int>();
    cfg.engine.hash_mb = e.at("hash_mb").get<int>();
    cfg.engine.per_position_timeout = std::chrono::milliseconds(e.at("timeout_ms").get<int>());
    cfg.engine.handshake_timeout =
        std::chrono::milliseconds(e.at("handshake_timeout_ms").get<int>());
    cfg.engine.workers = e.at("workers").get<int>();
    if (cfg.engine.depth < 1) fail(Errc::ConfigParse, "engine.depth must be >= 1");
    if (cfg.engine.multipv_k < 1) fail(Errc::ConfigParse, "engine.multipv_k must be >= 1");
    if (cfg.engine.per_position_timeout.count() <= 0)
        fail(Errc::ConfigParse, "engine.timeout_ms must be positive");

    const auto& s = j["sampler"];
    cfg.sampler.strategy = sample::strategy_from_name(s.at("strategy").get<std::string>());
    cfg.sampler.rare_theme_count = s.at("K").get<int>();
    cfg.sampler.per_theme_cap = s.at("M").get<int>();
    cfg.sampler.target_size = s.at("n").get<int>();
    cfg.sampler.seed = s.at("seed").get<std::uint64_t>();
    if (cfg.sampler.rare_theme_count < 1) fail(Errc::ConfigParse, "sampler.K must be >= 1");
    if (cfg.sampler.per_theme_cap < 1) fail(Errc::ConfigParse, "sampler.M must be >= 1");

    const auto& p = j["prompt"];
    cfg.prompt.distill = true;
    cfg.prompt.pv_mode = prompt::pv_mode_from_name(p.at("pv_mode").get<std::string>());
    cfg.prompt.include_themes = p.at("include_themes").get<bool>();
    cfg.prompt.feigned = p.at("feigned").get<bool>();

    cfg.teacher = teacher_from_json(j["teacher"], cfg.paths.cache_dir);

    cfg.reward.eta = j["reward"].at("eta").get<double>();
    cfg.reward.require_marker = j["reward"].at("require_marker").get<bool>();
    if (cfg.reward.eta < 0.0 || cfg.reward.eta >= 1.0)
        fail(Errc::ConfigParse, "reward.eta must lie in [0, 1)");

    const auto& v = j["eval"];
    cfg.eval.seed = v.at("seed").get<std::uint64_t>();
    cfg.eval.per_theme = v.at("per_theme").get<int>();
    cfg.eval.per_level = v.at("per_level").get<int>();
    auto cutoffs = v.at("cutoffs").get<std::vector<int>>();
    if (cutoffs.size() != 3 || cutoffs[0] >= cutoffs[1] || cutoffs[1] >= cutoffs[2])
        fail(Errc::ConfigParse, "eval.cutoffs must be three ascending ratings");
    cfg.eval.level_bands = {{"Beginner", 0, cutoffs[0]},
                            {"Intermediate", cutoffs[0], cutoffs[1]},
                            {"Advanced", cutoffs[1], cutoffs[2]},
                            {"Expert", cutoffs[2], 0}};
    cfg.eval.theme_labels = v.at("themes").get<std::vector<std::string>>();
    cfg.eval_endpoint = teacher_from_json(v["endpoint"], "");
    return cfg;
}

PipelineConfig load_config(const std::optional<std::string>& file_path,
                           const std::map<std::string, std::string>& env,
                           const ojson& flag_overrides) {
    ojson resolved = default_config_json();

    if (file_path) {
        ojson file = ojson::parse(util::read_file(*file_path), nullptr, false);
        if (file.is_discarded()) fail(Errc::ConfigParse, *file_path + " is not valid JSON");
        merge_strict(resolved, file, "");
    }

    ojson env_patch;
    for (const auto& [name, dotted] : env_key_map()) {
        auto it = env.find(name);
        if (it != env.end() && !it->second.empty()) set_dotted(env_patch, dotted, it->second);
    }
    if (!env_patch.is_null()) merge_strict(resolved, env_patch, "");

    if (!flag_overrides.is_null() && !flag_overrides.empty())
        merge_strict(resolved, flag_overrides, "");

    return config_from_json(resolved);
}

ojson config_to_json(const PipelineConfig& cfg) {
    ojson j = default_config_json();
    j["paths"]["csv"] = cfg.paths.csv;
    j["paths"]["work_dir"] = cfg.paths.work_dir;
    j["paths"]["cache_dir"] = cfg.paths.cache_dir;
    j["engine"]["path"] = cfg.engine.executable_path;
    j["engine"]["depth"] = cfg.engine.depth;
    j["engine"]["multipv_k"] = cfg.engine.multipv_k;
    j["engine"]["threads"] = cfg.engine.threads;
    j["engine"]["hash_mb"] = cfg.engine.hash_mb;
    j["engine"]["timeout_ms"] = static_cast<int>(cfg.engine.per_position_timeout.count());
    j["engine"]["handshake_timeout_ms"] =
        static_cast<int>(cfg.engine.handshake_timeout.count());
    j["engine"]["workers"] = cfg.engine.workers;
    j["sampler"]["strategy"] = sample::strategy_name(cfg.sampler.strategy);
    j["sampler"]["K"] = cfg.sampler.rare_theme_count;
    j["sampler"]["M"] = cfg.sampler.per_theme_cap;
    j["sampler"]["n"] = cfg.sampler.target_size;
    j["sampler"]["seed"] = cfg.sampler.seed;
    j["prompt"]["pv_mode"] = prompt::pv_mode_name(cfg.prompt.pv_mode);
    j["prompt"]["include_themes"] = cfg.prompt.include_themes;
    j["prompt"]["feigned"] = cfg.prompt.feigned;
    j["teacher"]["base_url"] = cfg.teacher.base_url;
    j["teacher"]["api_key_env"] = cfg.teacher.api_key_env;
    j["teacher"]["model"] = cfg.teacher.model_name;
    j["teacher"]["temperature"] = cfg.teacher.temperature;
    j["teacher"]["max_output_tokens"] = cfg.teacher.max_output_tokens;
    j["teacher"]["max_concurrency"] = cfg.teacher.max_concurrency;
    j["teacher"]["request_timeout_s"] = cfg.teacher.request_timeout_s;
    j["teacher"]["retry"]["max_attempts"] = cfg.teacher.retry.max_attempts;
    j["teacher"]["retry"]["base_backoff_ms"] = cfg.teacher.retry.base_backoff_ms;
    j["teacher"]["retry"]["jitter"] = cfg.teacher.retry.jitter;
    j["reward"]["eta"] = cfg.reward.eta;
    j["reward"]["require_marker"] = cfg.reward.require_marker;
    j["eval"]["seed"] = cfg.eval.seed;
    j["eval"]["per_theme"] = cfg.eval.per_theme;
    j["eval"]["per_level"] = cfg.eval.per_level;
    j["eval"]["cutoffs"] = {cfg.eval.level_bands[1].min_rating, cfg.eval.level_bands[2].min_rating,
                            cfg.eval.level_bands[3].min_rating};
    j["eval"]["themes"] = cfg.eval.theme_labels;
    j["eval"]["endpoint"]["base_url"] = cfg.eval_endpoint.base_url;
    j["eval"]["endpoint"]["api_key_env"] = cfg.eval_endpoint.api_key_env;
    j["eval"]["endpoint"]["model"] = cfg.eval_endpoint.model_name;
    j["eval"]["endpoint"]["max_concurrency"] = cfg.eval_endpoint.max_concurrency;
    j["eval"]["endpoint"]["request_timeout_s"] = cfg.eval_endpoint.request_timeout_s;
    return j;
}

std::string config_hash(const PipelineConfig& cfg) {
    return util::sha256_hex(config_to_json(cfg).dump());
}

} // namespace cdk::cfg
