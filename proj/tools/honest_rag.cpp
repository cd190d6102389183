// honest-rag: data preparation, pipeline runs, scoring, and report rendering
// for the hybrid retrieval QA pipeline.

#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "honestrag/honestrag.hpp"
#include "honestrag/remote.hpp"

namespace {

namespace hr = honestrag;
namespace fs = std::filesystem;

hr::ParseMode parse_mode(bool lenient) {
    return lenient ? hr::ParseMode::lenient : hr::ParseMode::strict;
}

std::vector<hr::QueryRecord> load_records(const std::string& path, bool lenient) {
    return hr::load_dataset(path, parse_mode(lenient), lenient ? &std::cerr : nullptr);
}

std::unique_ptr<hr::ChatBackend> make_scripted(const nlohmann::json& script,
                                               const std::string& which) {
    if (!script.contains(which) || !script.at(which).is_object()) {
        throw hr::ConfigError("script file has no \"" + which + "\" object");
    }
    const auto& section = script.at(which);
    std::map<std::string, std::string> rules;
    if (section.contains("rules")) {
        if (!section.at("rules").is_object()) {
            throw hr::ConfigError("script \"" + which + ".rules\" must be an object");
        }
        for (const auto& item : section.at("rules").items()) {
            if (!item.value().is_string()) {
                throw hr::ConfigError("script rule \"" + item.key() + "\" must map to a string");
            }
            rules[item.key()] = item.value().get<std::string>();
        }
    }
    std::string fallback = section.value("default", std::string("i don't know"));
    return std::make_unique<hr::ScriptedBackend>(std::move(rules), std::move(fallback), which);
}

struct PrepareOpts {
    std::string dataset;
    std::string output_dir = "out";
    int holdout = 250;
    std::uint64_t seed = 0;
    bool lenient = false;
};

int cmd_prepare_data(const PrepareOpts& opts) {
    const auto records = load_records(opts.dataset, opts.lenient);
    auto [train_records, test_records] = hr::split_holdout(records, opts.holdout, opts.seed);

    std::vector<hr::FinetuneExample> examples;
    examples.reserve(train_records.size());
    std::size_t replaced = 0;
    for (const hr::QueryRecord& rec : train_records) {
        examples.push_back(hr::transform(rec));
        if (examples.back().replaced) ++replaced;
    }
    hr::emit_training_files(examples, opts.output_dir, opts.holdout);
    hr::write_dataset(test_records, fs::path(opts.output_dir) / "test.jsonl");

    std::cout << "train=" << train_records.size() << " test=" << test_records.size()
              << " replaced=" << replaced << '\n';
    return 0;
}

struct RunOpts {
    std::string dataset;
    std::string output_dir = "out";
    std::string outcomes;  // default: <output_dir>/outcomes.jsonl
    std::string backend = "scripted";
    std::string script;
    std::string backend_url;
    int timeout_ms = 30000;
    std::string pipeline = "hybrid";
    int top_k = 10;
    int expand_m = 2;
    double threshold = 0.75;
    int max_context_chars = 4000;
    int parallelism = 1;
    int embedding_dim = 256;
    bool lenient = false;
};

int cmd_run(const RunOpts& opts) {
    std::unique_ptr<hr::ChatBackend> rag_backend;
    std::unique_ptr<hr::ChatBackend> ft_backend;
    if (opts.backend == "scripted") {
        if (opts.script.empty()) {
            throw hr::ConfigError("--backend scripted requires --script");
        }
        std::ifstream in(opts.script);
        if (!in) throw hr::IoFailure("cannot open script: " + opts.script);
        nlohmann::json script;
        try {
            script = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw hr::ConfigError("script file is not valid JSON: " + std::string(e.what()));
        }
        rag_backend = make_scripted(script, "rag");
        ft_backend = make_scripted(script, "finetuned");
    } else {
        if (opts.backend_url.empty()) {
            throw hr::ConfigError(
                "--backend remote requires --backend-url (or HONEST_RAG_BACKEND_URL)");
        }
        rag_backend = std::make_unique<hr::RemoteBackend>(opts.backend_url, opts.timeout_ms, "rag");
        ft_backend =
            std::make_unique<hr::RemoteBackend>(opts.backend_url, opts.timeout_ms, "finetuned");
    }

    const auto records = load_records(opts.dataset, opts.lenient);
    const hr::HashEmbeddingProvider provider(static_cast<std::size_t>(opts.embedding_dim));
    const hr::PrunerConfig cfg{opts.top_k, opts.expand_m, opts.threshold, opts.max_context_chars};
    const hr::PipelineMode mode = opts.pipeline == "finetuned_only"
                                      ? hr::PipelineMode::finetuned_only
                                      : hr::PipelineMode::hybrid;

    const auto outcomes = hr::run_batch(records, *rag_backend, *ft_backend, provider, cfg, mode,
                                        opts.parallelism);

    std::error_code ec;
    fs::create_directories(opts.output_dir, ec);
    const fs::path outcome_path =
        opts.outcomes.empty() ? fs::path(opts.output_dir) / "outcomes.jsonl"
                              : fs::path(opts.outcomes);
    hr::write_outcomes(outcomes, outcome_path);

    std::map<hr::Branch, std::size_t> histogram;
    std::size_t errors = 0;
    for (const hr::RoutingOutcome& outcome : outcomes) {
        ++histogram[outcome.branch];
        if (!outcome.error_note.empty()) ++errors;
    }
    std::cout << "outcomes=" << outcome_path.string() << '\n';
    for (const hr::Branch branch :
         {hr::Branch::rag_movie_accepted, hr::Branch::fallback_finetuned,
          hr::Branch::fallback_no_context}) {
        std::cout << hr::to_string(branch) << '=' << histogram[branch] << '\n';
    }
    std::cout << "errors=" << errors << '\n';
    return 0;
}

struct ScoreOpts {
    std::string dataset;
    std::string outcomes;
    std::string report;  // default: outcomes dir /report.json
    std::string mode = "full_weight";
    bool lenient = false;
};

int cmd_score(const ScoreOpts& opts) {
    const auto records = load_records(opts.dataset, opts.lenient);
    const auto outcomes = hr::read_outcomes(opts.outcomes);
    const auto joined = hr::join_and_judge(outcomes, records, &std::cerr);
    if (!joined.unjoinable_ids.empty()) {
        std::cerr << "warning: " << joined.unjoinable_ids.size() << " of " << outcomes.size()
                  << " outcomes had no matching ground truth\n";
    }

    const hr::ScoringMode mode =
        opts.mode == "crag_half" ? hr::ScoringMode::crag_half : hr::ScoringMode::full_weight;
    const hr::Scorecard card = hr::score_batch(joined.verdicts, mode);
    std::cout << hr::render_scorecard_text(card);

    const fs::path report_path = opts.report.empty()
                                     ? fs::path(opts.outcomes).parent_path() / "report.json"
                                     : fs::path(opts.report);
    hr::write_report(card, report_path);
    std::cout << "report=" << report_path.string() << '\n';

    const bool too_many_unjoinable =
        !outcomes.empty() && joined.unjoinable_ids.size() * 10 > outcomes.size();
    return too_many_unjoinable ? 1 : 0;
}

int cmd_report(const std::string& report_path) {
    std::ifstream in(report_path);
    if (!in) throw hr::IoFailure("cannot open report: " + report_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw hr::ConfigError("report is not valid JSON: " + std::string(e.what()));
    }
    std::cout << hr::render_scorecard_text(hr::scorecard_from_json(j));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid retrieval QA pipeline: prepare data, run, score, report"};
    app.set_config("--config", "", "key=value config file; command-line flags take precedence");
    app.require_subcommand(1);

    int rc = 0;

    PrepareOpts prepare;
    CLI::App* prep = app.add_subcommand(
        "prepare-data", "split a fixture and emit fine-tuning files (train.jsonl, manifest.json)");
    prep->add_option("--dataset", prepare.dataset, "line-delimited question fixture")->required();
    prep->add_option("--output-dir", prepare.output_dir, "directory for emitted files");
    prep->add_option("--holdout", prepare.holdout, "records reserved for testing")
        ->check(CLI::NonNegativeNumber);
    prep->add_option("--seed", prepare.seed, "shuffle seed");
    prep->add_flag("--lenient", prepare.lenient, "warn on unknown keys/blank lines instead of failing");
    prep->callback([&] { rc = cmd_prepare_data(prepare); });

    RunOpts run;
    CLI::App* runc = app.add_subcommand("run", "run the routing pipeline over a fixture");
    runc->add_option("--dataset", run.dataset, "line-delimited question fixture")->required();
    runc->add_option("--output-dir", run.output_dir, "directory for outcomes");
    runc->add_option("--outcomes", run.outcomes, "outcomes path (default <output-dir>/outcomes.jsonl)");
    runc->add_option("--backend", run.backend, "model backend")
        ->check(CLI::IsMember({"scripted", "remote"}));
    runc->add_option("--script", run.script, "scripted backend rules (JSON)");
    runc->add_option("--backend-url", run.backend_url, "remote chat endpoint")
        ->envname("HONEST_RAG_BACKEND_URL");
    runc->add_option("--timeout-ms", run.timeout_ms, "remote request timeout")
        ->envname("HONEST_RAG_TIMEOUT_MS")
        ->check(CLI::PositiveNumber);
    runc->add_option("--pipeline", run.pipeline, "pipeline variant")
        ->check(CLI::IsMember({"hybrid", "finetuned_only"}));
    runc->add_option("--top-k", run.top_k, "pruner: sentences kept by rank")
        ->check(CLI::PositiveNumber);
    runc->add_option("--expand-m", run.expand_m, "pruner: following sentences appended per seed")
        ->check(CLI::NonNegativeNumber);
    runc->add_option("--threshold", run.threshold, "pruner: minimum seed similarity")
        ->check(CLI::Range(0.0, 1.0));
    runc->add_option("--max-context-chars", run.max_context_chars, "pruner: context size cap")
        ->check(CLI::PositiveNumber);
    runc->add_option("--parallelism", run.parallelism, "concurrent records")
        ->check(CLI::PositiveNumber);
    runc->add_option("--embedding-dim", run.embedding_dim, "hash embedding dimension")
        ->check(CLI::Range(2, 1 << 20));
    runc->add_flag("--lenient", run.lenient, "warn on unknown keys/blank lines instead of failing");
    runc->callback([&] { rc = cmd_run(run); });

    ScoreOpts score;
    CLI::App* scorec = app.add_subcommand("score", "judge persisted outcomes against ground truth");
    scorec->add_option("--dataset", score.dataset, "line-delimited question fixture")->required();
    scorec->add_option("--outcomes", score.outcomes, "outcomes from `run`")->required();
    scorec->add_option("--report", score.report, "report path (default <outcomes dir>/report.json)");
    scorec->add_option("--scoring-mode", score.mode, "acceptable-answer weighting")
        ->check(CLI::IsMember({"full_weight", "crag_half"}));
    scorec->add_flag("--lenient", score.lenient, "warn on unknown keys/blank lines instead of failing");
    scorec->callback([&] { rc = cmd_score(score); });

    std::string report_path;
    CLI::App* reportc = app.add_subcommand("report", "render a saved report as a table");
    reportc->add_option("--report", report_path, "report JSON written by `score`")->required();
    reportc->callback([&] { rc = cmd_report(report_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const honestrag::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
