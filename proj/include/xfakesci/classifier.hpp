#pragma once

#include <string>
#include <vector>

#include "xfakesci/calibration.hpp"

namespace xfakesci {

enum class DecisionPath { IN_RANGE_GPT, IN_RANGE_PUB, PROXIMITY_GPT, PROXIMITY_PUB, TIE_DEFAULT };

std::string to_string(DecisionPath p);

struct Prediction {
    std::string doc_id;
    Source label = Source::PUBMED;
    double ratio_gpt = 0.0;
    double ratio_pub = 0.0;
    double dist_gpt = 0.0;
    double dist_pub = 0.0;
    DecisionPath decision_path = DecisionPath::TIE_DEFAULT;
};

struct ClassifierConfig {
    TrainingModel model_gpt;
    TrainingModel model_pub;
    CalibrationRange range_gpt;
    CalibrationRange range_pub;
};

// 0 inside the closed interval, otherwise the distance to the nearer endpoint.
double distance_to_range(double point, const CalibrationRange& range);

// GPT range first, then PubMed, then proximity; an exact distance tie goes
// to PUBMED and is surfaced as TIE_DEFAULT.
Prediction classify_multi(const TokenizedDoc& doc, const ClassifierConfig& config);

// One model, one range: the model's label when in range, otherwise the
// complement by proximity.
Prediction classify_single(const TokenizedDoc& doc, const TrainingModel& model,
                           const CalibrationRange& range);

struct BatchError {
    std::size_t index = 0;
    std::string doc_id;
    std::string message;
};

struct BatchResult {
    std::vector<Prediction> predictions;  // input order, failed docs omitted
    std::vector<BatchError> errors;
};

BatchResult classify_batch(const std::vector<TokenizedDoc>& docs, const ClassifierConfig& config);

// One JSON object per line, every Prediction field included.
std::string prediction_jsonl_line(const Prediction& p);
std::string predictions_to_jsonl(const std::vector<Prediction>& predictions);

}  // namespace xfakesci
