#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xfakesci/baselines.hpp"
#include "xfakesci/calibration.hpp"
#include "xfakesci/classifier.hpp"
#include "xfakesci/eval.hpp"

namespace xfakesci {

struct PipelineConfig {
    std::string gpt_corpus_path;
    std::string pubmed_corpus_path;
    Disease disease = Disease::ALZHEIMERS;
    std::optional<Period> period;
    int train_size = 100;
    int fold_size = 100;
    int test_pubmed = 50;
    int test_gpt = 50;
    std::string out_dir;
    BaselineHyper hyper;
    std::uint32_t seed = 42;
    bool include_titles = false;
    std::string stopwords_path;  // empty -> compiled-in default list
};

struct PipelineResult {
    std::vector<EvalReport> reports;
    CalibrationFile calibration;
    std::vector<std::string> artifact_paths;  // everything written under out_dir
};

// load -> preprocess -> split -> train both models -> calibrate -> classify
// the 50+50 test set with the network classifier and every baseline -> write
// models, calibration, predictions, and reports. Deterministic for a fixed
// config and seed. Errors carry the failing stage name.
PipelineResult run_pipeline(const PipelineConfig& config);

// Phase 1: node/edge counts and node-to-edge ratios per model.
// Phase 2: per-fold mean contribution ratios per source (2-decimal CSV).
struct PremiseInputs {
    std::string gpt_corpus_path;
    std::vector<std::pair<Period, std::string>> pubmed_corpora;
    Disease disease = Disease::ALZHEIMERS;
    int train_size = 100;
    int fold_size = 100;
    bool include_titles = false;
    bool pre_prune_counts = false;  // emit counts before LCC pruning instead
    std::string stopwords_path;
};

struct PremiseFiles {
    std::string phase1_csv;
    std::string phase2_csv;
};

PremiseFiles premise_report(const PremiseInputs& inputs, const std::string& out_dir);

}  // namespace xfakesci
