#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "honestrag/errors.hpp"
#include "honestrag/text.hpp"
#include "honestrag/types.hpp"

namespace honestrag {

struct FinetuneExample {
    std::string query;
    std::string target;  // original normalized answer, or "i don't know"
    QuestionType question_type = QuestionType::simple;
    bool replaced = false;

    bool operator==(const FinetuneExample&) const = default;
};

/// QLoRA hyperparameters emitted for the external trainer. The defaults are
/// the published configuration and are not recomputed.
struct TrainManifest {
    int lora_alpha = 16;
    int lora_r = 64;
    double lora_dropout = 0.1;
    int batch_size = 8;
    double learning_rate = 0.0002;
    double weight_decay = 0.001;
    int epochs = 5;
    std::string quantization = "4-bit";
    int holdout_count = 250;
};

/// Deterministic shuffle-then-split: the first `holdout` shuffled records
/// become the test set, the rest the training set. The Fisher-Yates pass is
/// spelled out (rather than std::shuffle, whose output is
/// implementation-defined) so a seed means the same split everywhere.
inline std::pair<std::vector<QueryRecord>, std::vector<QueryRecord>> split_holdout(
    const std::vector<QueryRecord>& records, int holdout = 250, std::uint64_t seed = 0) {
    if (holdout < 0) throw InsufficientRecords("holdout must be non-negative");
    if (records.size() <= static_cast<std::size_t>(holdout)) {
        throw InsufficientRecords("need more than " + std::to_string(holdout) +
                                  " records, have " + std::to_string(records.size()));
    }
    std::vector<QueryRecord> shuffled = records;
    std::mt19937_64 gen(seed);
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(gen() % i);
        std::swap(shuffled[i - 1], shuffled[j]);
    }
    std::vector<QueryRecord> test(shuffled.begin(), shuffled.begin() + holdout);
    std::vector<QueryRecord> train(shuffled.begin() + holdout, shuffled.end());
    return {std::move(train), std::move(test)};
}

/// Answer-replacement rule: comparison and false_premise questions keep
/// their answers, as do questions whose normalized answer is exactly one of
/// yes/no/true/false; every other answer becomes "i don't know".
inline FinetuneExample transform(const QueryRecord& record) {
    const std::string norm = text::normalize_answer(record.answer);
    const bool type_protected = record.question_type == QuestionType::comparison ||
                                record.question_type == QuestionType::false_premise;
    const bool binary_answer =
        norm == "yes" || norm == "no" || norm == "true" || norm == "false";
    FinetuneExample ex;
    ex.query = record.query;
    ex.question_type = record.question_type;
    if (type_protected || binary_answer) {
        ex.target = norm;
        ex.replaced = false;
    } else {
        ex.target = "i don't know";
        ex.replaced = true;
    }
    return ex;
}

/// Writes train.jsonl ({"query", "target"} per line) and manifest.json into
/// out_dir, creating it if needed. Output is byte-stable across runs.
inline TrainManifest emit_training_files(const std::vector<FinetuneExample>& train,
                                         const std::filesystem::path& out_dir,
                                         int holdout_count = 250) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoFailure("cannot create output directory: " + out_dir.string());

    const auto train_path = out_dir / "train.jsonl";
    {
        std::ofstream out(train_path);
        if (!out) throw IoFailure("cannot write " + train_path.string());
        for (const FinetuneExample& ex : train) {
            nlohmann::ordered_json j;
            j["query"] = ex.query;
            j["target"] = ex.target;
            out << j.dump() << '\n';
        }
        if (!out) throw IoFailure("failed while writing " + train_path.string());
    }

    TrainManifest manifest;
    manifest.holdout_count = holdout_count;
    const auto manifest_path = out_dir / "manifest.json";
    {
        std::ofstream out(manifest_path);
        if (!out) throw IoFailure("cannot write " + manifest_path.string());
        nlohmann::ordered_json j;
        j["lora_alpha"] = manifest.lora_alpha;
        j["lora_r"] = manifest.lora_r;
        j["lora_dropout"] = manifest.lora_dropout;
        j["batch_size"] = manifest.batch_size;
        j["learning_rate"] = manifest.learning_rate;
        j["weight_decay"] = manifest.weight_decay;
        j["epochs"] = manifest.epochs;
        j["quantization"] = manifest.quantization;
        j["holdout_count"] = manifest.holdout_count;
        out << j.dump(2) << '\n';
        if (!out) throw IoFailure("failed while writing " + manifest_path.string());
    }
    return manifest;
}

}  // namespace honestrag
