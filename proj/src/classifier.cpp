#include "xfakesci/classifier.hpp"

#include <json.hpp>

namespace xfakesci {

std::string to_string(DecisionPath p) {
    switch (p) {
        case DecisionPath::IN_RANGE_GPT: return "IN_RANGE_GPT";
        case DecisionPath::IN_RANGE_PUB: return "IN_RANGE_PUB";
        case DecisionPath::PROXIMITY_GPT: return "PROXIMITY_GPT";
        case DecisionPath::PROXIMITY_PUB: return "PROXIMITY_PUB";
        case DecisionPath::TIE_DEFAULT: return "TIE_DEFAULT";
    }
    return "TIE_DEFAULT";
}

double distance_to_range(double point, const CalibrationRange& range) {
    if (range.contains(point)) return 0.0;
    if (point < range.lower) return range.lower - point;
    return point - range.upper;
}

Prediction classify_multi(const TokenizedDoc& doc, const ClassifierConfig& config) {
    Prediction p;
    p.doc_id = doc.doc_id;
    p.ratio_gpt = contribution_ratio(doc, config.model_gpt).ratio;
    p.ratio_pub = contribution_ratio(doc, config.model_pub).ratio;
    p.dist_gpt = distance_to_range(p.ratio_gpt, config.range_gpt);
    p.dist_pub = distance_to_range(p.ratio_pub, config.range_pub);

    if (config.range_gpt.contains(p.ratio_gpt)) {
        p.label = Source::GPT;
        p.decision_path = DecisionPath::IN_RANGE_GPT;
    } else if (config.range_pub.contains(p.ratio_pub)) {
        p.label = Source::PUBMED;
        p.decision_path = DecisionPath::IN_RANGE_PUB;
    } else if (p.dist_gpt < p.dist_pub) {
        p.label = Source::GPT;
        p.decision_path = DecisionPath::PROXIMITY_GPT;
    } else if (p.dist_pub < p.dist_gpt) {
        p.label = Source::PUBMED;
        p.decision_path = DecisionPath::PROXIMITY_PUB;
    } else {
        p.label = Source::PUBMED;
        p.decision_path = DecisionPath::TIE_DEFAULT;
    }
    return p;
}

Prediction classify_single(const TokenizedDoc& doc, const TrainingModel& model,
                           const CalibrationRange& range) {
    Prediction p;
    p.doc_id = doc.doc_id;
    const double ratio = contribution_ratio(doc, model).ratio;
    const double dist = distance_to_range(ratio, range);
    const bool gpt_model = model.label == Source::GPT;
    (gpt_model ? p.ratio_gpt : p.ratio_pub) = ratio;
    (gpt_model ? p.dist_gpt : p.dist_pub) = dist;

    if (range.contains(ratio)) {
        p.label = model.label;
        p.decision_path = gpt_model ? DecisionPath::IN_RANGE_GPT : DecisionPath::IN_RANGE_PUB;
    } else {
        p.label = gpt_model ? Source::PUBMED : Source::GPT;
        p.decision_path = gpt_model ? DecisionPath::PROXIMITY_PUB : DecisionPath::PROXIMITY_GPT;
    }
    return p;
}

BatchResult classify_batch(const std::vector<TokenizedDoc>& docs, const ClassifierConfig& config) {
    BatchResult result;
    result.predictions.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        try {
            result.predictions.push_back(classify_multi(docs[i], config));
        } catch (const Error& e) {
            result.errors.push_back({i, docs[i].doc_id, e.what()});
        }
    }
    return result;
}

std::string prediction_jsonl_line(const Prediction& p) {
    nlohmann::ordered_json line;
    line["doc_id"] = p.doc_id;
    line["label"] = to_string(p.label);
    line["ratio_gpt"] = p.ratio_gpt;
    line["ratio_pub"] = p.ratio_pub;
    line["dist_gpt"] = p.dist_gpt;
    line["dist_pub"] = p.dist_pub;
    line["decision_path"] = to_string(p.decision_path);
    return line.dump();
}

std::string predictions_to_jsonl(const std::vector<Prediction>& predictions) {
    std::string out;
    for (const auto& p : predictions) {
        out += prediction_jsonl_line(p);
        out += '\n';
    }
    return out;
}

}  // namespace xfakesci
