#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "xfakesci/calibration.hpp"

using namespace xfakesci;
using testutil::tokdoc;

namespace {

// A hand-built model whose edge set is exactly the given token chain.
TrainingModel chain_model(const std::vector<std::string>& tokens, Source label = Source::GPT) {
    TrainingModel model;
    model.label = label;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        model.nodes.insert(tokens[i]);
        model.nodes.insert(tokens[i + 1]);
        model.edges[make_edge_key(tokens[i], tokens[i + 1])] = 1.0;
    }
    model.pruned = true;
    return model;
}

}  // namespace

TEST_CASE("contribution_ratio with no matching bigrams is zero") {
    const TrainingModel model = chain_model({"gene", "expression", "profile"});
    const auto r = contribution_ratio(tokdoc({{"tumor", "growth", "rate"}}, 12), model);
    CHECK(r.bigram_count == 0);
    CHECK(r.doc_wc == 12);
    CHECK(r.ratio == 0.0);
}

TEST_CASE("contribution_ratio divides matching bigrams by the raw word count") {
    // Six-token chain: five distinct bigrams, all present in the model.
    const std::vector<std::string> chain = {"insulin", "resistance", "drives",
                                            "metabolic", "stress", "response"};
    const TrainingModel model = chain_model(chain);
    const auto r = contribution_ratio(tokdoc({chain}, 20, "PMID-1"), model);
    CHECK(r.bigram_count == 5);
    CHECK(r.doc_wc == 20);
    CHECK(r.ratio == 0.25);
    CHECK(r.doc_id == "PMID-1");
}

TEST_CASE("contribution_ratio counts a repeated bigram once") {
    const TrainingModel model = chain_model({"mental", "health"});
    const auto r = contribution_ratio(
        tokdoc({{"mental", "health"}, {"mental", "health"}, {"mental", "health"}}, 10), model);
    CHECK(r.bigram_count == 1);
    CHECK(r.ratio == 0.1);
}

TEST_CASE("contribution_ratio rejects an empty raw abstract") {
    const TrainingModel model = chain_model({"a", "b"});
    CHECK_THROWS_AS(contribution_ratio(tokdoc({{"a", "b"}}, 0), model), ZeroWordCount);
}

TEST_CASE("contribution_ratio agrees with a linear scan over the edge list") {
    std::mt19937 rng(11);
    const std::vector<std::string> vocab = {"cell", "line", "assay", "dose",
                                            "trial", "cohort", "marker", "serum"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);

    for (int round = 0; round < 30; ++round) {
        TrainingModel model;
        model.label = Source::PUBMED;
        for (int e = 0; e < 6; ++e) {
            const auto& s = vocab[pick(rng)];
            const auto& t = vocab[pick(rng)];
            if (s == t) continue;
            model.nodes.insert(s);
            model.nodes.insert(t);
            model.edges[make_edge_key(s, t)] = 1.0;
        }

        std::vector<std::string> sentence;
        for (int w = 0; w < 10; ++w) sentence.push_back(vocab[pick(rng)]);
        const TokenizedDoc doc = tokdoc({sentence}, 40);

        int expected = 0;
        for (const auto& bigram : distinct_bigrams(doc)) {
            bool found = false;
            for (const auto& [key, weight] : model.edges)
                if (key == make_edge_key(bigram.first, bigram.second)) found = true;
            if (found) ++expected;
        }

        const auto r = contribution_ratio(doc, model);
        CHECK(r.bigram_count == expected);
        CHECK(r.ratio == doctest::Approx(expected / 40.0).epsilon(1e-15));
    }
}

TEST_CASE("fold_means averages ratios per fold in order") {
    const std::vector<std::string> chain = {"amyloid", "plaque", "burden", "increases"};
    const TrainingModel model = chain_model(chain);

    // Fold 0: ratios 3/10 each. Fold 1: 3/30 and 3/10 -> mean 0.2.
    const std::vector<std::vector<TokenizedDoc>> folds = {
        {tokdoc({chain}, 10, "a"), tokdoc({chain}, 10, "b")},
        {tokdoc({chain}, 30, "c"), tokdoc({chain}, 10, "d")},
    };
    const auto means = fold_means(folds, model);
    REQUIRE(means.size() == 2);
    CHECK(means[0].fold_index == 0);
    CHECK(means[0].n_docs == 2);
    CHECK(means[0].mean == doctest::Approx(0.30).epsilon(1e-15));
    CHECK(means[1].fold_index == 1);
    CHECK(means[1].mean == doctest::Approx(0.20).epsilon(1e-15));
}

TEST_CASE("fold_means rejects an empty fold and names a zero-word-count fold") {
    const TrainingModel model = chain_model({"a", "b"});
    CHECK_THROWS_AS(fold_means({{}}, model), Error);

    const std::vector<std::vector<TokenizedDoc>> folds = {
        {tokdoc({{"a", "b"}}, 10)},
        {tokdoc({{"a", "b"}}, 0, "bad")},
    };
    CHECK_THROWS_WITH_AS(fold_means(folds, model),
                         doctest::Contains("fold 1"), ZeroWordCount);
}

TEST_CASE("compute_ranges spans the observed fold means") {
    // Six-fold means as measured for generated and indexed Alzheimer's corpora.
    const std::vector<double> gpt = {0.27, 0.30, 0.30, 0.28, 0.28, 0.29};
    const std::vector<double> pub = {0.15, 0.16, 0.16, 0.16, 0.16, 0.16};
    const auto [g, p] = compute_ranges(gpt, pub);
    CHECK(g.label == Source::GPT);
    CHECK(g.lower == 0.27);
    CHECK(g.upper == 0.30);
    CHECK(p.label == Source::PUBMED);
    CHECK(p.lower == 0.15);
    CHECK(p.upper == 0.16);
}

TEST_CASE("compute_ranges on the depression 2020-2024 means") {
    const std::vector<double> pub = {0.11, 0.10, 0.11, 0.11, 0.11, 0.11};
    const auto [g, p] = compute_ranges({0.28, 0.30, 0.32, 0.27, 0.30, 0.30}, pub);
    CHECK(g.lower == 0.27);
    CHECK(g.upper == 0.32);
    CHECK(p.lower == 0.10);
    CHECK(p.upper == 0.11);
}

TEST_CASE("a single fold mean degenerates to a point range") {
    const auto [g, p] = compute_ranges({0.29}, {0.15});
    CHECK(g.lower == 0.29);
    CHECK(g.upper == 0.29);
    CHECK(p.lower == 0.15);
    CHECK(p.upper == 0.15);
    CHECK(p.contains(0.15));
}

TEST_CASE("compute_ranges requires means on both sides") {
    CHECK_THROWS_AS(compute_ranges({}, {0.15}), EmptyMeans);
    CHECK_THROWS_AS(compute_ranges({0.29}, {}), EmptyMeans);
}

TEST_CASE("every fold mean lands inside its computed range") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    for (int round = 0; round < 25; ++round) {
        std::vector<double> gpt, pub;
        for (int i = 0; i < 6; ++i) {
            gpt.push_back(u(rng));
            pub.push_back(u(rng));
        }
        const auto [g, p] = compute_ranges(gpt, pub);
        for (double m : gpt) CHECK(g.contains(m));
        for (double m : pub) CHECK(p.contains(m));
        CHECK(g.contains(g.lower));
        CHECK(g.contains(g.upper));
        CHECK_FALSE(g.contains(g.upper + 1e-9));
        CHECK_FALSE(g.contains(g.lower - 1e-9));
    }
}

TEST_CASE("scaling every ratio scales the fold means") {
    const std::vector<std::string> chain = {"t1", "t2", "t3", "t4"};
    const TrainingModel model = chain_model(chain);
    const std::vector<std::vector<TokenizedDoc>> folds = {
        {tokdoc({chain}, 10), tokdoc({chain}, 20)}};
    const std::vector<std::vector<TokenizedDoc>> scaled = {
        {tokdoc({chain}, 30), tokdoc({chain}, 60)}};
    const double base = fold_means(folds, model)[0].mean;
    const double third = fold_means(scaled, model)[0].mean;
    CHECK(third == doctest::Approx(base / 3.0).epsilon(1e-12));
}

TEST_CASE("calibration file round-trips through JSON") {
    CalibrationFile cal;
    cal.gpt = {Source::GPT, 0.27, 0.30};
    cal.pubmed = {Source::PUBMED, 0.14, 0.15};
    cal.gpt_fold_means = {0.27, 0.30, 0.30, 0.28, 0.28, 0.29};
    cal.pubmed_fold_means = {0.15, 0.14, 0.15, 0.15, 0.14, 0.14};
    CHECK_FALSE(cal.ranges_overlap());

    const std::string text = serialize_calibration(cal);
    CHECK(text.find("\"ranges_overlap\": false") != std::string::npos);
    const CalibrationFile back = deserialize_calibration(text);
    CHECK(back.gpt.lower == cal.gpt.lower);
    CHECK(back.gpt.upper == cal.gpt.upper);
    CHECK(back.pubmed.lower == cal.pubmed.lower);
    CHECK(back.pubmed.upper == cal.pubmed.upper);
    CHECK(back.gpt_fold_means == cal.gpt_fold_means);
    CHECK(back.pubmed_fold_means == cal.pubmed_fold_means);
    CHECK(serialize_calibration(back) == text);

    testutil::TempDir dir("calib");
    save_calibration(cal, dir.file("calibration.json"));
    const CalibrationFile loaded = load_calibration(dir.file("calibration.json"));
    CHECK(loaded.gpt.upper == 0.30);
    CHECK(loaded.pubmed_fold_means == cal.pubmed_fold_means);
}

TEST_CASE("overlap detection on touching and nested ranges") {
    CalibrationFile cal;
    cal.gpt = {Source::GPT, 0.20, 0.30};
    cal.pubmed = {Source::PUBMED, 0.10, 0.20};
    CHECK(cal.ranges_overlap());  // shared endpoint counts

    cal.pubmed = {Source::PUBMED, 0.22, 0.25};
    CHECK(cal.ranges_overlap());  // nested

    cal.pubmed = {Source::PUBMED, 0.10, 0.19};
    CHECK_FALSE(cal.ranges_overlap());

    const std::string text = serialize_calibration(cal);
    CHECK(deserialize_calibration(text).ranges_overlap() == cal.ranges_overlap());
}

TEST_CASE("deserialize_calibration rejects junk") {
    CHECK_THROWS_AS(deserialize_calibration("not json"), MalformedJson);
}
