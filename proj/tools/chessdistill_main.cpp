// Pipeline driver: ingest -> analyze -> sample -> distill -> validate ->
// emit -> eval, plus the reward scorer/service. Every stage reads its inputs
// from disk and writes its own artifacts under the work dir, so stages can be
// re-run and diffed independently.

#include "cdk/config.hpp"
#include "cdk/engine.hpp"
#include "cdk/errors.hpp"
#include "cdk/eval.hpp"
#include "cdk/prompt.hpp"
#include "cdk/puzzle.hpp"
#include "cdk/reward.hpp"
#include "cdk/sampler.hpp"
#include "cdk/teacher.hpp"
#include "cdk/util.hpp"
#include "cdk/validate.hpp"

#include <CLI11.hpp>

#include <unistd.h>

#include <atomic>
#include <condition_variable>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace fs = std::filesystem;
using namespace cdk;
using util::ojson;

namespace {

int exit_code_for(Errc code) {
    switch (code) {
    case Errc::ConfigParse:
    case Errc::UnknownKey:
    case Errc::AuthConfigMissing:
        return 1;
    case Errc::SpawnFailure:
    case Errc::HandshakeTimeout:
    case Errc::UnsupportedOption:
    case Errc::EngineCrashed:
    case Errc::AnalysisTimeout:
    case Errc::AuthFailure:
    case Errc::RateLimited:
    case Errc::ProviderError:
    case Errc::Timeout:
    case Errc::AbortedRun:
        return 3;
    default:
        return 2; // data errors
    }
}

std::map<std::string, std::string> environment_map() {
    std::map<std::string, std::string> env;
    for (const auto& [name, key] : cfg::env_key_map()) {
        (void)key;
        if (const char* v = std::getenv(name.c_str())) env[name] = v;
    }
    return env;
}

std::string self_directory() {
    char buf[4096];
    ssize_t n = readlink("/proc/self/exe", buf, sizeof buf - 1);
    if (n <= 0) return ".";
    buf[n] = '\0';
    return fs::path(buf).parent_path().string();
}

std::string find_on_path(const std::string& name) {
    const char* path = std::getenv("PATH");
    if (!path) return "";
    for (const auto& dir : util::split(path, ':')) {
        fs::path candidate = fs::path(dir) / name;
        if (::access(candidate.c_str(), X_OK) == 0) return candidate.string();
    }
    return "";
}

// configured engine > stockfish on PATH > the bundled miniengine
std::string resolve_engine_path(const std::string& configured) {
    if (!configured.empty()) return configured;
    if (std::string sf = find_on_path("stockfish"); !sf.empty()) return sf;
    fs::path sibling = fs::path(self_directory()) / "cdk-miniengine";
    if (::access(sibling.c_str(), X_OK) == 0) return sibling.string();
    fail(Errc::SpawnFailure,
         "no engine: set engine.path / CHESSDISTILL_ENGINE, or install stockfish");
}

std::unordered_set<std::string> read_id_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoFailure, "cannot open id file " + path);
    std::unordered_set<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        std::string id = util::trim(line);
        if (!id.empty()) ids.insert(id);
    }
    return ids;
}

void write_id_file(const std::string& path, const std::vector<data::Puzzle>& puzzles) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot write " + path);
    for (const auto& p : puzzles) out << p.id << '\n';
}

std::string file_sha(const std::string& path) { return util::sha256_hex(util::read_file(path)); }

// Artifact provenance + idempotent re-runs: a stage whose recorded input
// hashes and config hash are unchanged is a no-op.
bool stage_up_to_date(const std::string& meta_path, const ojson& meta) {
    if (!fs::exists(meta_path)) return false;
    auto old = ojson::parse(util::read_file(meta_path), nullptr, false);
    return !old.is_discarded() && old == meta;
}

ojson make_meta(const cfg::PipelineConfig& config,
                const std::map<std::string, std::string>& input_hashes) {
    ojson meta;
    meta["toolkit_version"] = cfg::kToolkitVersion;
    meta["config_hash"] = cfg::config_hash(config);
    ojson inputs = ojson::object();
    for (const auto& [name, sha] : input_hashes) inputs[name] = sha;
    meta["inputs"] = std::move(inputs);
    return meta;
}

struct CommonFlags {
    std::optional<std::string> config_file;
    ojson overrides = ojson::object();

    cfg::PipelineConfig load() const {
        auto config = cfg::load_config(config_file, environment_map(), overrides);
        fs::create_directories(config.paths.work_dir);
        return config;
    }
};

std::map<std::string, engine::Analysis> load_analyses(const std::string& path,
                                                      std::unordered_set<std::string>* mismatches) {
    std::map<std::string, engine::Analysis> out;
    for (const auto& row : util::read_jsonl(path)) {
        bool mismatch = false;
        std::string id;
        engine::Analysis a = engine::analysis_from_json(row, &mismatch, &id);
        if (mismatch && mismatches) mismatches->insert(id);
        out.emplace(std::move(id), std::move(a));
    }
    return out;
}

int cmd_ingest(const cfg::PipelineConfig& config) {
    if (config.paths.csv.empty()) fail(Errc::ConfigParse, "paths.csv is not set");
    std::string puzzles_path = config.paths.work_dir + "/puzzles.jsonl";
    std::string rejects_path = config.paths.work_dir + "/rejects.jsonl";
    std::string meta_path = puzzles_path + ".meta.json";
    ojson meta = make_meta(config, {{"csv", file_sha(config.paths.csv)}});
    if (stage_up_to_date(meta_path, meta) && fs::exists(puzzles_path)) {
        std::cerr << "[ingest] up-to-date, skipping\n";
        return 0;
    }

    data::IngestResult result = data::ingest_csv(config.paths.csv);
    data::write_puzzles_jsonl(result.puzzles, puzzles_path);
    std::vector<ojson> rejects;
    for (const auto& r : result.rejects) {
        ojson j;
        j["row"] = r.row;
        j["code"] = errc_name(r.code);
        j["message"] = r.message;
        j["puzzle_id"] = r.puzzle_id;
        rejects.push_back(std::move(j));
    }
    util::write_jsonl(rejects_path, rejects);
    util::write_file(meta_path, meta.dump());
    std::cerr << "[ingest] rows=" << result.rows_total << " accepted=" << result.puzzles.size()
              << " rejected=" << result.rejects.size() << "\n";
    return 0;
}

int cmd_stats(const cfg::PipelineConfig& config, const std::string& input) {
    std::string path = input.empty() ? config.paths.work_dir + "/puzzles.jsonl" : input;
    auto puzzles = data::read_puzzles_jsonl(path);
    std::string report = data::stats_report(puzzles);
    std::cout << report;
    util::write_file(config.paths.work_dir + "/stats.txt", report);
    return 0;
}

int cmd_analyze(const cfg::PipelineConfig& config, const std::string& ids_file, long limit) {
    auto puzzles = data::read_puzzles_jsonl(config.paths.work_dir + "/puzzles.jsonl");
    if (!ids_file.empty()) {
        auto keep = read_id_file(ids_file);
        std::erase_if(puzzles, [&](const data::Puzzle& p) { return !keep.count(p.id); });
    }
    if (limit > 0 && puzzles.size() > static_cast<size_t>(limit))
        puzzles.resize(static_cast<size_t>(limit));

    engine::EngineConfig engine_cfg = config.engine;
    engine_cfg.executable_path = resolve_engine_path(engine_cfg.executable_path);
    std::cerr << "[analyze] engine=" << engine_cfg.executable_path
              << " depth=" << engine_cfg.depth << " multipv=" << engine_cfg.multipv_k
              << " puzzles=" << puzzles.size() << "\n";

    engine::EnginePool pool(engine_cfg);
    std::vector<ojson> rows(puzzles.size());
    std::atomic<size_t> cursor{0};
    std::atomic<size_t> mismatches{0};
    std::atomic<size_t> failures{0};
    std::mutex log_mu;
    auto worker = [&] {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= puzzles.size()) return;
            try {
                auto lease = pool.acquire();
                engine::MasterSolution sol;
                try {
                    sol = engine::master_solution(*lease, puzzles[i], engine_cfg);
                } catch (...) {
                    lease.discard();
                    throw;
                }
                mismatches += sol.solution_mismatch;
                rows[i] = engine::analysis_to_json(puzzles[i].id, sol.analysis,
                                                   sol.solution_mismatch);
            } catch (const Error& e) {
                ++failures;
                std::lock_guard lock(log_mu);
                std::cerr << "[analyze] " << puzzles[i].id << " failed: " << e.what() << "\n";
            }
        }
    };
    std::vector<std::thread> threads;
    size_t n_threads = std::min<size_t>(static_cast<size_t>(std::max(engine_cfg.workers, 1)),
                                        std::max<size_t>(puzzles.size(), 1));
    for (size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    std::vector<ojson> kept;
    for (auto& row : rows)
        if (!row.is_null()) kept.push_back(std::move(row));
    util::write_jsonl(config.paths.work_dir + "/analyses.jsonl", kept);
    std::cerr << "[analyze] analyzed=" << kept.size() << " mismatches=" << mismatches
              << " failures=" << failures << "\n";
    return failures == 0 ? 0 : 3;
}

int cmd_sample(const cfg::PipelineConfig& config, const std::string& exclude_file,
               const std::string& out_name) {
    auto puzzles = data::read_puzzles_jsonl(config.paths.work_dir + "/puzzles.jsonl");
    sample::SamplerConfig sampler_cfg = config.sampler;
    if (!exclude_file.empty()) sampler_cfg.exclude_ids = read_id_file(exclude_file);

    auto sampled = sample::run_sampler(puzzles, sampler_cfg);
    std::string name = out_name.empty()
                           ? std::string("sample_") + sample::strategy_name(sampler_cfg.strategy)
                           : out_name;
    std::string ids_path = config.paths.work_dir + "/" + name + ".ids";
    write_id_file(ids_path, sampled);
    std::string report = data::stats_report(sampled, "Sample");
    util::write_file(config.paths.work_dir + "/" + name + ".stats.txt", report);
    std::cout << report;
    std::cerr << "[sample] strategy=" << sample::strategy_name(sampler_cfg.strategy)
              << " selected=" << sampled.size() << " -> " << ids_path << "\n";
    return 0;
}

int cmd_distill(const cfg::PipelineConfig& config, const std::string& ids_file, long limit) {
    auto puzzles = data::read_puzzles_jsonl(config.paths.work_dir + "/puzzles.jsonl");
    if (!ids_file.empty()) {
        auto keep = read_id_file(ids_file);
        std::erase_if(puzzles, [&](const data::Puzzle& p) { return !keep.count(p.id); });
    }
    if (limit > 0 && puzzles.size() > static_cast<size_t>(limit))
        puzzles.resize(static_cast<size_t>(limit));

    std::map<std::string, engine::Analysis> analyses;
    std::string analyses_path = config.paths.work_dir + "/analyses.jsonl";
    if (fs::exists(analyses_path)) analyses = load_analyses(analyses_path, nullptr);
    if (config.prompt.pv_mode != prompt::PvMode::omitted && analyses.empty())
        std::cerr << "[distill] warning: no analyses.jsonl; mateIn1 puzzles proceed, others "
                     "will error per item\n";

    auto records = llm::batch_distill(config.teacher, puzzles, analyses, config.prompt);
    std::vector<ojson> rows;
    size_t ok = 0;
    size_t cached = 0;
    size_t failed = 0;
    for (const auto& r : records) {
        ok += r.ok;
        cached += r.from_cache;
        failed += !r.ok;
        rows.push_back(llm::distill_record_to_json(r));
    }
    util::write_jsonl(config.paths.work_dir + "/distill.jsonl", rows);
    std::cerr << "[distill] ok=" << ok << " cached=" << cached << " failed=" << failed << "\n";
    return 0;
}

int cmd_validate(const cfg::PipelineConfig& config) {
    auto puzzles = data::read_puzzles_jsonl(config.paths.work_dir + "/puzzles.jsonl");
    std::map<std::string, data::Puzzle> by_id;
    for (auto& p : puzzles) by_id.emplace(p.id, std::move(p));

    std::map<std::string, engine::Analysis> analyses;
    std::string analyses_path = config.paths.work_dir + "/analyses.jsonl";
    if (fs::exists(analyses_path)) analyses = load_analyses(analyses_path, nullptr);

    std::vector<ojson> reports;
    size_t accepted = 0;
    size_t rejected = 0;
    for (const auto& row : util::read_jsonl(config.paths.work_dir + "/distill.jsonl")) {
        auto record = llm::distill_record_from_json(row);
        if (!record.ok) continue;
        auto it = by_id.find(record.puzzle_id);
        if (it == by_id.end()) continue;
        const engine::Analysis* analysis = nullptr;
        auto ait = analyses.find(record.puzzle_id);
        if (ait != analyses.end()) analysis = &ait->second;
        auto report =
            trace::validate_trace(record.trace, it->second, it->second.solution, analysis);
        accepted += report.accepted;
        rejected += !report.accepted;
        reports.push_back(trace::report_to_json(report));
    }
    util::write_jsonl(config.paths.work_dir + "/validation.jsonl", reports);
    std::cerr << "[validate] accepted=" << accepted << " rejected=" << rejected << "\n";
    return 0;
}

int cmd_emit(const cfg::PipelineConfig& config, const std::string& kind,
             const std::string& ids_file, bool include_mismatches) {
    std::string puzzles_path = config.paths.work_dir + "/puzzles.jsonl";
    auto puzzles = data::read_puzzles_jsonl(puzzles_path);
    std::map<std::string, const data::Puzzle*> by_id;
    for (const auto& p : puzzles) by_id.emplace(p.id, &p);

    std::unordered_set<std::string> mismatch_ids;
    std::string analyses_path = config.paths.work_dir + "/analyses.jsonl";
    if (fs::exists(analyses_path)) load_analyses(analyses_path, &mismatch_ids);

    std::string out_path = config.paths.work_dir + "/" + kind + ".jsonl";
    std::string meta_path = out_path + ".meta.json";
    std::map<std::string, std::string> inputs = {{"puzzles", file_sha(puzzles_path)}};
    if (!ids_file.empty()) inputs["ids"] = file_sha(ids_file);

    if (kind == "sft") {
        std::string distill_path = config.paths.work_dir + "/distill.jsonl";
        std::string validation_path = config.paths.work_dir + "/validation.jsonl";
        inputs["distill"] = file_sha(distill_path);
        inputs["validation"] = file_sha(validation_path);
        ojson meta = make_meta(config, inputs);
        if (stage_up_to_date(meta_path, meta) && fs::exists(out_path)) {
            std::cerr << "[emit] sft up-to-date, skipping\n";
            return 0;
        }

        std::unordered_set<std::string> accepted;
        for (const auto& row : util::read_jsonl(validation_path))
            if (row.at("verdict").get<std::string>() == "accepted")
                accepted.insert(row.at("puzzle_id").get<std::string>());

        std::unordered_set<std::string> keep;
        if (!ids_file.empty()) keep = read_id_file(ids_file);

        std::vector<data::SftRecord> records;
        size_t skipped_mismatch = 0;
        for (const auto& row : util::read_jsonl(distill_path)) {
            auto record = llm::distill_record_from_json(row);
            if (!record.ok || !accepted.count(record.puzzle_id)) continue;
            if (!keep.empty() && !keep.count(record.puzzle_id)) continue;
            auto it = by_id.find(record.puzzle_id);
            if (it == by_id.end()) continue;
            if (!include_mismatches && mismatch_ids.count(record.puzzle_id)) {
                ++skipped_mismatch;
                continue;
            }
            data::SftRecord sft;
            sft.puzzle_id = record.puzzle_id;
            sft.prompt = prompt::build_solver_prompt(*it->second);
            sft.response = record.trace;
            sft.teacher_model = record.teacher_model;
            sft.themes = it->second->themes;
            sft.rating = it->second->rating;
            records.push_back(std::move(sft));
        }
        data::emit_sft(records, out_path);
        util::write_file(meta_path, meta.dump());
        std::cerr << "[emit] sft records=" << records.size()
                  << " skipped_mismatch=" << skipped_mismatch << " -> " << out_path << "\n";
        return 0;
    }

    if (kind == "rlvr") {
        ojson meta = make_meta(config, inputs);
        if (stage_up_to_date(meta_path, meta) && fs::exists(out_path)) {
            std::cerr << "[emit] rlvr up-to-date, skipping\n";
            return 0;
        }
        std::unordered_set<std::string> keep;
        if (!ids_file.empty()) keep = read_id_file(ids_file);
        std::vector<data::RlvrRecord> records;
        for (const auto& p : puzzles) {
            if (!keep.empty() && !keep.count(p.id)) continue;
            data::RlvrRecord r;
            r.puzzle_id = p.id;
            r.prompt = prompt::build_solver_prompt(p);
            r.ground_truth = p.solution.uci();
            r.themes = p.themes;
            r.rating = p.rating;
            records.push_back(std::move(r));
        }
        data::emit_rlvr(records, out_path);
        util::write_file(meta_path, meta.dump());
        std::cerr << "[emit] rlvr records=" << records.size() << " -> " << out_path << "\n";
        return 0;
    }

    fail(Errc::ConfigParse, "emit kind must be sft or rlvr, got '" + kind + "'");
}

int cmd_eval(const cfg::PipelineConfig& config, const std::string& train_ids_file,
             const std::string& from_items) {
    std::string eval_dir = config.paths.work_dir + "/eval";
    fs::create_directories(eval_dir);

    std::vector<eval::ItemRecord> items;
    if (!from_items.empty()) {
        for (const auto& row : util::read_jsonl(from_items))
            items.push_back(eval::item_from_json(row));
        eval::rescore_items(items, config.reward);
    } else {
        auto puzzles = data::read_puzzles_jsonl(config.paths.work_dir + "/puzzles.jsonl");
        std::unordered_set<std::string> train_ids;
        if (!train_ids_file.empty()) train_ids = read_id_file(train_ids_file);
        auto [themes, levels] = eval::build_test_splits(puzzles, train_ids, config.eval);
        std::cerr << "[eval] split: " << themes.cells.size() << " theme cells x "
                  << config.eval.per_theme << " + " << levels.cells.size() << " level cells x "
                  << config.eval.per_level << "\n";
        items = eval::run_queries(config.eval_endpoint, {&themes, &levels}, config.reward);
    }

    // raw completions go to disk before any aggregation; rescoring is offline
    std::vector<ojson> rows;
    for (const auto& item : items) rows.push_back(eval::item_to_json(item));
    util::write_jsonl(eval_dir + "/items.jsonl", rows);

    eval::EvalReport report =
        eval::build_report(config.eval_endpoint.model_name, config.eval, std::move(items));
    report.config_hash = cfg::config_hash(config);
    report.toolkit_version = cfg::kToolkitVersion;
    util::write_file(eval_dir + "/report.txt", eval::render_report_text(report));
    util::write_file(eval_dir + "/report.json", eval::render_report_json(report).dump(2) + "\n");
    std::cout << eval::render_report_text(report);
    return 0;
}

int cmd_reward(const cfg::PipelineConfig& config, const std::string& expected) {
    auto move = chess::Move::try_parse(util::to_lower(expected));
    if (!move) fail(Errc::BadUciMove, "--expected '" + expected + "' is not a UCI move");
    std::string line;
    while (std::getline(std::cin, line)) {
        auto outcome = reward::score(line, *move, config.reward);
        std::ostringstream num;
        num << outcome.reward;
        std::cout << num.str() << "\n";
    }
    return 0;
}

std::atomic<bool> g_stop_requested{false};

int cmd_reward_serve(const cfg::PipelineConfig& config, const std::string& host, int port) {
    reward::RewardService service(config.reward);
    service.start(host, port);
    std::cerr << "[reward-serve] listening on " << host << ":" << service.port()
              << " eta=" << config.reward.eta << "\n";
    std::signal(SIGINT, [](int) { g_stop_requested = true; });
    std::signal(SIGTERM, [](int) { g_stop_requested = true; });
    while (!g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chess puzzle distillation toolkit"};
    app.require_subcommand(1);

    CommonFlags common;
    std::string config_file;
    app.add_option("--config", config_file, "JSON config file")->envname("CHESSDISTILL_CONFIG");
    std::string work_dir;
    app.add_option("--work-dir", work_dir, "artifact directory (default: out)");

    auto override_str = [&](const char* dotted) {
        return [&common, dotted](const std::string& v) {
            ojson* node = &common.overrides;
            auto parts = util::split(dotted, '.');
            for (size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
            (*node)[parts.back()] = v;
        };
    };
    auto override_num = [&](const char* dotted) {
        return [&common, dotted](const std::string& v) {
            ojson* node = &common.overrides;
            auto parts = util::split(dotted, '.');
            for (size_t i = 0; i + 1 < parts.size(); ++i) node = &(*node)[parts[i]];
            (*node)[parts.back()] = ojson::parse(v);
        };
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse the Lichess CSV into puzzles.jsonl");
    ingest->add_option_function<std::string>("--csv", override_str("paths.csv"), "puzzle CSV path");

    // stats
    auto* stats = app.add_subcommand("stats", "dataset statistics table");
    std::string stats_input;
    stats->add_option("--input", stats_input, "puzzles JSONL (default: work dir)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "run the engine over puzzles");
    std::string analyze_ids;
    long analyze_limit = 0;
    analyze->add_option("--ids", analyze_ids, "only analyze ids listed in this file");
    analyze->add_option("--limit", analyze_limit, "cap the number of puzzles");
    analyze->add_option_function<std::string>("--engine", override_str("engine.path"),
                                              "UCI engine executable");
    analyze->add_option_function<std::string>("--depth", override_num("engine.depth"),
                                              "search depth");
    analyze->add_option_function<std::string>("--multipv", override_num("engine.multipv_k"),
                                              "PV lines per position");
    analyze->add_option_function<std::string>("--workers", override_num("engine.workers"),
                                              "parallel engine processes");

    // sample
    auto* samplecmd = app.add_subcommand("sample", "select puzzles (balanced / random / hard)");
    std::string sample_exclude;
    std::string sample_out;
    samplecmd->add_option_function<std::string>("--strategy", override_str("sampler.strategy"),
                                                "balanced | random | hard");
    samplecmd->add_option_function<std::string>("--K", override_num("sampler.K"),
                                                "rare themes to balance");
    samplecmd->add_option_function<std::string>("--M", override_num("sampler.M"),
                                                "max samples per theme");
    samplecmd->add_option_function<std::string>("--n", override_num("sampler.n"),
                                                "target size (random/hard)");
    samplecmd->add_option_function<std::string>("--seed", override_num("sampler.seed"), "RNG seed");
    samplecmd->add_option("--exclude", sample_exclude, "id file to exclude (disjoint splits)");
    samplecmd->add_option("--out", sample_out, "output name (default sample_<strategy>)");

    // distill
    auto* distill = app.add_subcommand("distill", "generate teacher traces");
    std::string distill_ids;
    long distill_limit = 0;
    distill->add_option("--ids", distill_ids, "id file selecting puzzles");
    distill->add_option("--limit", distill_limit, "cap the number of puzzles");
    distill->add_option_function<std::string>("--variant", override_str("prompt.pv_mode"),
                                              "best_move | multi_pv | omitted");
    distill->add_flag_callback(
        "--no-themes", [&] { common.overrides["prompt"]["include_themes"] = false; },
        "drop the Themes row");
    distill->add_flag_callback(
        "--no-feigned", [&] { common.overrides["prompt"]["feigned"] = false; },
        "plain explain-why task instead of feigned discovery");
    distill->add_option_function<std::string>("--base-url", override_str("teacher.base_url"),
                                              "chat-completions endpoint");
    distill->add_option_function<std::string>("--model", override_str("teacher.model"),
                                              "teacher model name");
    distill->add_option_function<std::string>(
        "--concurrency", override_num("teacher.max_concurrency"), "max in-flight requests");

    // validate
    auto* validate = app.add_subcommand("validate", "check teacher traces, emit JSONL reports");

    // emit
    auto* emit = app.add_subcommand("emit", "write SFT / RLVR JSONL datasets");
    std::string emit_kind;
    std::string emit_ids;
    bool emit_include_mismatches = false;
    emit->add_option("--kind", emit_kind, "sft | rlvr")->required();
    emit->add_option("--ids", emit_ids, "id file selecting puzzles");
    emit->add_flag("--include-mismatches", emit_include_mismatches,
                   "keep puzzles whose engine move disagreed with the dataset");

    // eval
    auto* evalcmd = app.add_subcommand("eval", "900-puzzle evaluation protocol");
    std::string eval_train_ids;
    std::string eval_from_items;
    evalcmd->add_option("--train-ids", eval_train_ids, "ids the splits must avoid");
    evalcmd->add_option("--from-items", eval_from_items, "rescore persisted items.jsonl offline");
    evalcmd->add_option_function<std::string>("--endpoint", override_str("eval.endpoint.base_url"),
                                              "model endpoint base URL");
    evalcmd->add_option_function<std::string>("--model", override_str("eval.endpoint.model"),
                                              "model name");
    evalcmd->add_option_function<std::string>("--seed", override_num("eval.seed"), "split seed");
    evalcmd->add_option_function<std::string>(
        "--concurrency", override_num("eval.endpoint.max_concurrency"), "max in-flight requests");

    // reward
    auto* rewardcmd = app.add_subcommand("reward", "score completions from stdin");
    std::string reward_expected;
    rewardcmd->add_option("--expected", reward_expected, "ground-truth UCI move")->required();
    rewardcmd->add_option_function<std::string>("--eta", override_num("reward.eta"),
                                                "partial credit in [0,1)");

    // reward-serve
    auto* serve = app.add_subcommand("reward-serve", "batch reward HTTP service");
    std::string serve_host = "127.0.0.1";
    int serve_port = 8330;
    serve->add_option("--host", serve_host, "bind address");
    serve->add_option("--port", serve_port, "port (0 = pick a free one)");
    serve->add_option_function<std::string>("--eta", override_num("reward.eta"),
                                            "partial credit in [0,1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!config_file.empty()) common.config_file = config_file;
        if (!work_dir.empty()) common.overrides["paths"]["work_dir"] = work_dir;
        cfg::PipelineConfig config = common.load();

        if (ingest->parsed()) return cmd_ingest(config);
        if (stats->parsed()) return cmd_stats(config, stats_input);
        if (analyze->parsed()) return cmd_analyze(config, analyze_ids, analyze_limit);
        if (samplecmd->parsed()) return cmd_sample(config, sample_exclude, sample_out);
        if (distill->parsed()) return cmd_distill(config, distill_ids, distill_limit);
        if (validate->parsed()) return cmd_validate(config);
        if (emit->parsed())
            return cmd_emit(config, emit_kind, emit_ids, emit_include_mismatches);
        if (evalcmd->parsed()) return cmd_eval(config, eval_train_ids, eval_from_items);
        if (rewardcmd->parsed()) return cmd_reward(config, reward_expected);
        if (serve->parsed()) return cmd_reward_serve(config, serve_host, serve_port);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
