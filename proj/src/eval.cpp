#include "xfakesci/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

#include <json.hpp>

namespace xfakesci {

ConfusionMatrix confusion(const std::vector<std::pair<Source, Source>>& gold_and_predicted) {
    if (gold_and_predicted.empty()) throw EmptyPredictions("confusion: no scored documents");
    ConfusionMatrix m;
    for (const auto& [gold, predicted] : gold_and_predicted) {
        if (gold == Source::PUBMED)
            (predicted == Source::PUBMED ? m.tp : m.fn) += 1;
        else
            (predicted == Source::GPT ? m.tn : m.fp) += 1;
    }
    return m;
}

double f1(const ConfusionMatrix& matrix) {
    const double denom = 2.0 * matrix.tp + matrix.fp + matrix.fn;
    if (denom <= 0.0) throw UndefinedF1("f1: 2*tp + fp + fn is zero");
    return 2.0 * matrix.tp / denom;
}

namespace {

std::string pct(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
    return buf;
}

std::string period_text(const std::optional<Period>& period) {
    return period ? to_string(*period) : std::string{};
}

void sort_reports(std::vector<EvalReport>& reports) {
    std::sort(reports.begin(), reports.end(), [](const EvalReport& a, const EvalReport& b) {
        return std::make_tuple(to_string(a.disease), period_text(a.period), a.classifier) <
               std::make_tuple(to_string(b.disease), period_text(b.period), b.classifier);
    });
}

std::string to_csv(const std::vector<EvalReport>& reports) {
    std::string out = "classifier,disease,period,tp,fp,fn,tn,f1_pct\n";
    for (const auto& r : reports) {
        out += r.classifier + "," + to_string(r.disease) + "," + period_text(r.period) + ",";
        if (r.implemented) {
            out += std::to_string(r.matrix.tp) + "," + std::to_string(r.matrix.fp) + "," +
                   std::to_string(r.matrix.fn) + "," + std::to_string(r.matrix.tn) + "," +
                   pct(r.f1);
        } else {
            out += ",,,,n/a";
        }
        out += "\n";
    }
    return out;
}

std::string to_json(const std::vector<EvalReport>& reports) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json row;
        row["classifier"] = r.classifier;
        row["disease"] = to_string(r.disease);
        row["period"] = r.period ? nlohmann::ordered_json(to_string(*r.period))
                                 : nlohmann::ordered_json(nullptr);
        row["implemented"] = r.implemented;
        if (r.implemented) {
            row["tp"] = r.matrix.tp;
            row["fp"] = r.matrix.fp;
            row["fn"] = r.matrix.fn;
            row["tn"] = r.matrix.tn;
            row["f1"] = r.f1;
            row["f1_pct"] = pct(r.f1);
        } else {
            row["tp"] = nullptr;
            row["fp"] = nullptr;
            row["fn"] = nullptr;
            row["tn"] = nullptr;
            row["f1"] = nullptr;
            row["f1_pct"] = "n/a";
        }
        rows.push_back(row);
    }
    return rows.dump(2) + "\n";
}

std::string to_markdown(const std::vector<EvalReport>& reports) {
    std::string out =
        "| classifier | disease | period | tp | fp | fn | tn | f1 |\n"
        "|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
        out += "| " + r.classifier + " | " + to_string(r.disease) + " | " +
               period_text(r.period) + " | ";
        if (r.implemented) {
            out += std::to_string(r.matrix.tp) + " | " + std::to_string(r.matrix.fp) + " | " +
                   std::to_string(r.matrix.fn) + " | " + std::to_string(r.matrix.tn) + " | " +
                   pct(r.f1) + "% |";
        } else {
            out += "n/a | n/a | n/a | n/a | n/a |";
        }
        out += "\n";
    }
    return out;
}

}  // namespace

std::string write_report(std::vector<EvalReport> reports, ReportFormat format) {
    if (reports.empty()) throw EmptyPredictions("write_report: no reports");
    sort_reports(reports);
    switch (format) {
        case ReportFormat::JSON: return to_json(reports);
        case ReportFormat::CSV: return to_csv(reports);
        case ReportFormat::MARKDOWN_TABLE: return to_markdown(reports);
    }
    throw Error("write_report: unknown format");
}

}  // namespace xfakesci
