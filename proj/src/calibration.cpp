#include "xfakesci/calibration.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace xfakesci {

ContributionRatio contribution_ratio(const TokenizedDoc& doc, const TrainingModel& model) {
    if (doc.raw_word_count <= 0)
        throw ZeroWordCount("document \"" + doc.doc_id + "\" has an empty raw abstract");

    ContributionRatio result;
    result.doc_id = doc.doc_id;
    result.doc_wc = doc.raw_word_count;
    for (const auto& bigram : distinct_bigrams(doc))
        if (model.has_edge(bigram.first, bigram.second)) result.bigram_count += 1;
    result.ratio = static_cast<double>(result.bigram_count) / result.doc_wc;
    return result;
}

std::vector<FoldMean> fold_means(const std::vector<std::vector<TokenizedDoc>>& folds,
                                 const TrainingModel& model) {
    std::vector<FoldMean> means;
    means.reserve(folds.size());
    for (std::size_t k = 0; k < folds.size(); ++k) {
        const auto& fold = folds[k];
        if (fold.empty()) throw Error("fold " + std::to_string(k) + " is empty");
        double sum = 0.0;
        for (const auto& doc : fold) {
            try {
                sum += contribution_ratio(doc, model).ratio;
            } catch (const ZeroWordCount& e) {
                throw ZeroWordCount("fold " + std::to_string(k) + ": " + e.what());
            }
        }
        FoldMean m;
        m.fold_index = static_cast<int>(k);
        m.n_docs = static_cast<int>(fold.size());
        m.mean = sum / fold.size();
        means.push_back(m);
    }
    return means;
}

std::pair<CalibrationRange, CalibrationRange> compute_ranges(const std::vector<double>& gpt_means,
                                                             const std::vector<double>& pub_means) {
    if (gpt_means.empty() || pub_means.empty())
        throw EmptyMeans("compute_ranges: both mean lists must be non-empty");

    auto range_of = [](const std::vector<double>& means, Source label) {
        const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
        return CalibrationRange{label, *lo, *hi};
    };
    return {range_of(gpt_means, Source::GPT), range_of(pub_means, Source::PUBMED)};
}

std::string serialize_calibration(const CalibrationFile& cal) {
    nlohmann::ordered_json doc;
    doc["gpt"] = {{"lower", cal.gpt.lower}, {"upper", cal.gpt.upper}};
    doc["pubmed"] = {{"lower", cal.pubmed.lower}, {"upper", cal.pubmed.upper}};
    doc["fold_means"] = {{"gpt", cal.gpt_fold_means}, {"pubmed", cal.pubmed_fold_means}};
    doc["ranges_overlap"] = cal.ranges_overlap();
    return doc.dump(2) + "\n";
}

CalibrationFile deserialize_calibration(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedJson(std::string("calibration: ") + e.what());
    }
    CalibrationFile cal;
    cal.gpt = {Source::GPT, doc.at("gpt").at("lower").get<double>(),
               doc.at("gpt").at("upper").get<double>()};
    cal.pubmed = {Source::PUBMED, doc.at("pubmed").at("lower").get<double>(),
                  doc.at("pubmed").at("upper").get<double>()};
    if (doc.contains("fold_means")) {
        cal.gpt_fold_means = doc["fold_means"].value("gpt", std::vector<double>{});
        cal.pubmed_fold_means = doc["fold_means"].value("pubmed", std::vector<double>{});
    }
    return cal;
}

void save_calibration(const CalibrationFile& cal, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write calibration file: " + path);
    out << serialize_calibration(cal);
}

CalibrationFile load_calibration(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open calibration file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_calibration(buf.str());
}

}  // namespace xfakesci
