#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xfakesci/corpus.hpp"

namespace xfakesci {

// Positive class is PUBMED: tp = PubMed->PubMed, tn = GPT->GPT,
// fp = GPT->PubMed, fn = PubMed->GPT.
struct ConfusionMatrix {
    int tp = 0;
    int tn = 0;
    int fp = 0;
    int fn = 0;

    int total() const { return tp + tn + fp + fn; }
};

struct EvalReport {
    std::string classifier;
    Disease disease = Disease::ALZHEIMERS;
    std::optional<Period> period;
    ConfusionMatrix matrix;
    double f1 = 0.0;
    bool implemented = true;  // false renders as an n/a row
};

enum class ReportFormat { JSON, CSV, MARKDOWN_TABLE };

ConfusionMatrix confusion(const std::vector<std::pair<Source, Source>>& gold_and_predicted);

// 2*tp / (2*tp + fp + fn)
double f1(const ConfusionMatrix& matrix);

// Deterministic bytes, rows sorted by (disease, period, classifier),
// percentages rendered to 2 decimals.
std::string write_report(std::vector<EvalReport> reports, ReportFormat format);

}  // namespace xfakesci
