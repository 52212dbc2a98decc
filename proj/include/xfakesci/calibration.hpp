#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xfakesci/textnet.hpp"

namespace xfakesci {

struct ContributionRatio {
    std::string doc_id;
    int bigram_count = 0;  // distinct document bigrams whose edge is in the model
    int doc_wc = 0;        // raw whitespace word count of the origin abstract
    double ratio = 0.0;    // bigram_count / doc_wc
};

struct FoldMean {
    int fold_index = 0;
    double mean = 0.0;
    int n_docs = 0;
};

struct CalibrationRange {
    Source label = Source::PUBMED;
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double point) const { return lower <= point && point <= upper; }
};

ContributionRatio contribution_ratio(const TokenizedDoc& doc, const TrainingModel& model);

// One mean per fold, order preserved. A ZeroWordCount inside fold k is
// rethrown with the fold index named.
std::vector<FoldMean> fold_means(const std::vector<std::vector<TokenizedDoc>>& folds,
                                 const TrainingModel& model);

// [min, max] of the fold means for each source.
std::pair<CalibrationRange, CalibrationRange> compute_ranges(
    const std::vector<double>& gpt_means, const std::vector<double>& pub_means);

// On-disk calibration: both ranges plus the fold means they came from.
struct CalibrationFile {
    CalibrationRange gpt;
    CalibrationRange pubmed;
    std::vector<double> gpt_fold_means;
    std::vector<double> pubmed_fold_means;

    bool ranges_overlap() const {
        return gpt.lower <= pubmed.upper && pubmed.lower <= gpt.upper;
    }
};

std::string serialize_calibration(const CalibrationFile& cal);
CalibrationFile deserialize_calibration(const std::string& json_text);
void save_calibration(const CalibrationFile& cal, const std::string& path);
CalibrationFile load_calibration(const std::string& path);

}  // namespace xfakesci
