#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "xfakesci/eval.hpp"

using namespace xfakesci;

namespace {

std::vector<std::pair<Source, Source>> pairs(int pub_right, int pub_wrong, int gpt_right,
                                             int gpt_wrong) {
    std::vector<std::pair<Source, Source>> out;
    for (int i = 0; i < pub_right; ++i) out.emplace_back(Source::PUBMED, Source::PUBMED);
    for (int i = 0; i < pub_wrong; ++i) out.emplace_back(Source::PUBMED, Source::GPT);
    for (int i = 0; i < gpt_right; ++i) out.emplace_back(Source::GPT, Source::GPT);
    for (int i = 0; i < gpt_wrong; ++i) out.emplace_back(Source::GPT, Source::PUBMED);
    return out;
}

EvalReport report(const std::string& classifier, Disease disease, std::optional<Period> period,
                  ConfusionMatrix m) {
    EvalReport r;
    r.classifier = classifier;
    r.disease = disease;
    r.period = period;
    r.matrix = m;
    r.f1 = f1(m);
    return r;
}

}  // namespace

TEST_CASE("confusion counts with the real-publication-positive convention") {
    // 50 real abstracts all kept, 25 generated ones caught, 25 leaked through.
    const ConfusionMatrix m = confusion(pairs(50, 0, 25, 25));
    CHECK(m.tp == 50);
    CHECK(m.fp == 25);
    CHECK(m.fn == 0);
    CHECK(m.tn == 25);
    CHECK(m.total() == 100);
}

TEST_CASE("confusion on a perfect classifier") {
    const ConfusionMatrix m = confusion(pairs(10, 0, 10, 0));
    CHECK(m.tp == 10);
    CHECK(m.tn == 10);
    CHECK(m.fp == 0);
    CHECK(m.fn == 0);
}

TEST_CASE("confusion on an inverted classifier") {
    const ConfusionMatrix m = confusion(pairs(0, 10, 0, 10));
    CHECK(m.tp == 0);
    CHECK(m.tn == 0);
    CHECK(m.fp == 10);
    CHECK(m.fn == 10);
}

TEST_CASE("confusion refuses an empty prediction list") {
    CHECK_THROWS_AS(confusion({}), EmptyPredictions);
}

TEST_CASE("f1 on the published benchmark matrices") {
    CHECK(f1({50, 25, 25, 0}) == doctest::Approx(0.8000).epsilon(1e-9));
    CHECK(f1({50, 41, 9, 0}) == doctest::Approx(100.0 / 109.0).epsilon(1e-12));
    CHECK(f1({50, 38, 12, 0}) == doctest::Approx(100.0 / 112.0).epsilon(1e-12));
}

TEST_CASE("f1 rendered to two decimals matches the benchmark percentages") {
    const auto pct = [](ConfusionMatrix m) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", f1(m) * 100.0);
        return std::string(buf);
    };
    CHECK(pct({50, 25, 25, 0}) == "80.00");
    CHECK(pct({50, 41, 9, 0}) == "91.74");
    CHECK(pct({50, 38, 12, 0}) == "89.29");
}

TEST_CASE("f1 is undefined when the denominator vanishes") {
    CHECK_THROWS_AS(f1({0, 10, 0, 0}), UndefinedF1);
}

TEST_CASE("f1 ignores true negatives") {
    const double base = f1({50, 25, 25, 0});
    for (int tn : {0, 1, 1000}) CHECK(f1({50, tn, 25, 0}) == base);
}

TEST_CASE("confusion and f1 agree with a per-pair tally oracle") {
    std::mt19937 rng(7);
    std::bernoulli_distribution coin(0.5);
    for (int round = 0; round < 20; ++round) {
        std::vector<std::pair<Source, Source>> scored;
        int tp = 0, tn = 0, fp = 0, fn = 0;
        for (int i = 0; i < 200; ++i) {
            const Source gold = coin(rng) ? Source::PUBMED : Source::GPT;
            const Source predicted = coin(rng) ? Source::PUBMED : Source::GPT;
            scored.emplace_back(gold, predicted);
            if (gold == Source::PUBMED && predicted == Source::PUBMED) ++tp;
            if (gold == Source::PUBMED && predicted == Source::GPT) ++fn;
            if (gold == Source::GPT && predicted == Source::GPT) ++tn;
            if (gold == Source::GPT && predicted == Source::PUBMED) ++fp;
        }
        const ConfusionMatrix m = confusion(scored);
        CHECK(m.tp == tp);
        CHECK(m.tn == tn);
        CHECK(m.fp == fp);
        CHECK(m.fn == fn);
        if (2 * tp + fp + fn > 0) {
            const double score = f1(m);
            CHECK(score == doctest::Approx(2.0 * tp / (2.0 * tp + fp + fn)).epsilon(1e-12));
            CHECK(score >= 0.0);
            CHECK(score <= 1.0);
        }
    }
}

TEST_CASE("write_report emits a single row with a header") {
    const auto rows = {report("xfakesci", Disease::DEPRESSION, Period::P2020_2024,
                              {50, 25, 25, 0})};
    const std::string csv = write_report(rows, ReportFormat::CSV);
    CHECK(csv == "classifier,disease,period,tp,fp,fn,tn,f1_pct\n"
                 "xfakesci,depression,2020-2024,50,25,0,25,80.00\n");
}

TEST_CASE("write_report is deterministic") {
    const std::vector<EvalReport> rows = {
        report("xfakesci", Disease::CANCER, Period::P2015_2019, {50, 41, 9, 0}),
        report("naive_bayes", Disease::CANCER, Period::P2015_2019, {40, 30, 20, 10}),
    };
    for (ReportFormat format :
         {ReportFormat::CSV, ReportFormat::JSON, ReportFormat::MARKDOWN_TABLE})
        CHECK(write_report(rows, format) == write_report(rows, format));
}

TEST_CASE("write_report sorts five classifiers across three diseases into 15 rows") {
    std::vector<EvalReport> rows;
    for (Disease d : {Disease::DEPRESSION, Disease::ALZHEIMERS, Disease::CANCER})
        for (const char* name :
             {"xfakesci", "naive_bayes", "logreg", "linear_svm", "classical_svm"})
            rows.push_back(report(name, d, Period::P2020_2024, {10, 10, 0, 0}));

    const std::string csv = write_report(rows, ReportFormat::CSV);
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 16);  // header + 15 rows

    // Sorted by (disease, period, classifier): alzheimers block first,
    // classical_svm first inside each block.
    CHECK(csv.find("classical_svm,alzheimers") < csv.find("xfakesci,alzheimers"));
    CHECK(csv.find("xfakesci,alzheimers") < csv.find("classical_svm,cancer"));
    CHECK(csv.find("xfakesci,cancer") < csv.find("classical_svm,depression"));
}

TEST_CASE("write_report renders an unimplemented classifier as an n/a row") {
    EvalReport row;
    row.classifier = "classical_svm";
    row.disease = Disease::ALZHEIMERS;
    row.period = Period::P2020_2024;
    row.implemented = false;

    const std::string csv = write_report({row}, ReportFormat::CSV);
    CHECK(csv.find("classical_svm,alzheimers,2020-2024,,,,,n/a") != std::string::npos);
    const std::string md = write_report({row}, ReportFormat::MARKDOWN_TABLE);
    CHECK(md.find("n/a") != std::string::npos);
    const std::string json = write_report({row}, ReportFormat::JSON);
    CHECK(json.find("\"implemented\": false") != std::string::npos);
}

TEST_CASE("write_report refuses an empty report list") {
    CHECK_THROWS_AS(write_report({}, ReportFormat::CSV), EmptyPredictions);
}
