// Generates the synthetic corpora and transport cassettes under fixtures/.
// Everything is index-derived (no RNG), so regeneration is byte-identical.
//
// The alzheimers corpora are ratio-engineered: each calibration/test document
// is a walk along a token path (B distinct bigrams, all of them edges of the
// model trained from the corpus head) padded with repeats to exactly W
// whitespace words, so its contribution ratio is B/W by construction. Fold
// mean schedules are hit by alternating B = m-1 / B = m+1 around the target.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct Record {
    std::string id;
    std::string title;
    std::string abstract_text;
};

std::string zero_pad(int value, int width) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%0*d", width, value);
    return buf;
}

// --- ratio-engineered corpora ---------------------------------------------

struct PathCorpusSpec {
    std::string token_prefix;   // "g" or "p"
    int token_digits = 2;
    int n_tokens = 0;           // path nodes; edges (t_i, t_i+1)
    int n_chords = 0;           // extra (t_i, t_j) edges, j >= i+2, train-only
    int doc_words = 0;          // W for fold and test documents
    std::vector<int> fold_bigram_means;  // target mean B per fold (ratio = B/W)
    std::vector<int> test_bigrams;       // cycled across the 50 test docs
    std::string id_prefix;      // "GPT-SYN-" or numeric base as string
    int id_base = 0;            // when > 0, ids are id_base + index
    std::string title_stem;
};

std::string token_of(const PathCorpusSpec& spec, int i) {
    return spec.token_prefix + zero_pad(i, spec.token_digits);
}

std::string walk_sentence(const PathCorpusSpec& spec, int start, int n_bigrams) {
    std::string s = token_of(spec, start);
    for (int k = 1; k <= n_bigrams; ++k) s += " " + token_of(spec, start + k);
    return s + ".";
}

// B distinct path bigrams starting at `start`, padded to exactly `words`
// whitespace words with two-word sentences that repeat path bigrams already
// present in the walk (so the distinct count stays B).
std::string ratio_doc(const PathCorpusSpec& spec, int start, int n_bigrams, int words) {
    std::string text = walk_sentence(spec, start, n_bigrams);
    int remaining = words - (n_bigrams + 1);
    int k = 0;
    if (remaining % 2 == 1) {
        text += " " + token_of(spec, start) + " " + token_of(spec, start + 1) + " " +
                token_of(spec, start + 2) + ".";
        remaining -= 3;
    }
    while (remaining > 0) {
        const int at = start + (k % n_bigrams);
        text += " " + token_of(spec, at) + " " + token_of(spec, at + 1) + ".";
        remaining -= 2;
        ++k;
    }
    return text;
}

std::vector<std::pair<int, int>> chord_list(const PathCorpusSpec& spec) {
    std::vector<std::pair<int, int>> chords;
    for (int gap = 2; gap < spec.n_tokens && static_cast<int>(chords.size()) < spec.n_chords;
         ++gap)
        for (int i = 0; i + gap < spec.n_tokens && static_cast<int>(chords.size()) < spec.n_chords;
             ++i)
            chords.emplace_back(i, i + gap);
    return chords;
}

std::vector<Record> build_path_corpus(const PathCorpusSpec& spec) {
    std::vector<Record> records;
    const auto chords = chord_list(spec);
    int serial = 0;

    auto push = [&](const std::string& abstract_text) {
        ++serial;
        Record r;
        r.id = spec.id_base > 0 ? std::to_string(spec.id_base + serial)
                                : spec.id_prefix + zero_pad(serial, 4);
        r.title = spec.title_stem + " " + zero_pad(serial, 4);
        r.abstract_text = abstract_text;
        records.push_back(std::move(r));
    };

    // 100 training documents: the full path plus this document's share of the
    // chords. These build the model; their word counts are never measured.
    for (int d = 0; d < 100; ++d) {
        std::string text = walk_sentence(spec, 0, spec.n_tokens - 1);
        for (std::size_t c = d; c < chords.size(); c += 100)
            text += " " + token_of(spec, chords[c].first) + " " +
                    token_of(spec, chords[c].second) + ".";
        push(text);
    }

    // Calibration folds: 100 documents each, B alternating mean-1 / mean+1.
    for (std::size_t f = 0; f < spec.fold_bigram_means.size(); ++f) {
        const int mean = spec.fold_bigram_means[f];
        for (int j = 0; j < 100; ++j) {
            const int b = j % 2 == 0 ? mean - 1 : mean + 1;
            const int start = (j + static_cast<int>(f) * 3) % (spec.n_tokens - 1 - b);
            push(ratio_doc(spec, start, b, spec.doc_words));
        }
    }

    // 50 test documents, every ratio interior to the calibration range.
    for (int j = 0; j < 50; ++j) {
        const int b = spec.test_bigrams[j % spec.test_bigrams.size()];
        const int start = (j * 5) % (spec.n_tokens - 1 - b);
        push(ratio_doc(spec, start, b, spec.doc_words));
    }
    return records;
}

// --- filler text for the non-ratio corpora --------------------------------

const char* kLexicon[] = {
    "patients",   "clinical",   "cognitive",  "decline",     "treatment",  "analysis",
    "cohort",     "baseline",   "outcomes",   "therapy",     "neural",     "imaging",
    "memory",     "function",   "protein",    "levels",      "brain",      "tissue",
    "progression", "trial",     "participants", "measures",  "significant", "association",
    "risk",       "factors",    "aging",      "population",  "screening",  "diagnosis",
    "assessment", "intervention", "response", "biomarkers",  "plasma",     "serum",
    "receptor",   "binding",    "expression", "pathway",     "inflammation", "vascular",
    "genetic",    "variants",   "placebo",    "efficacy",    "safety",     "adverse",
    "events",     "followup",   "survival",   "incidence",   "prevalence", "symptoms",
    "severity",   "onset",      "duration",   "remission",   "relapse",    "recovery",
    "mortality",  "morbidity",  "comorbidity", "burden",
};
constexpr int kLexiconSize = static_cast<int>(sizeof(kLexicon) / sizeof(kLexicon[0]));

std::string filler_sentence(int seed, int words) {
    std::string s;
    for (int k = 0; k < words; ++k) {
        std::string w = kLexicon[(seed * 31 + k * 7) % kLexiconSize];
        if (k == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
        s += (k == 0 ? "" : " ") + w;
    }
    return s + ".";
}

std::string filler_abstract(int seed, int words) {
    std::string text;
    int remaining = words;
    int k = 0;
    while (remaining > 0) {
        const int len = remaining >= 14 ? 10 + (seed + k) % 5 : remaining;
        text += (text.empty() ? "" : " ") + filler_sentence(seed * 13 + k, len);
        remaining -= len;
        ++k;
    }
    return text;
}

// --- serialization ---------------------------------------------------------

void write_file(const std::string& path, const std::string& text) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", path.c_str());
        std::exit(1);
    }
    out << text;
}

void write_corpus(const std::string& path, const std::vector<Record>& records, bool gpt_ids) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json record;
        record[gpt_ids ? "GPT-ID" : "PMID"] = r.id;
        record["Title"] = r.title;
        record["Abstract"] = r.abstract_text;
        array.push_back(std::move(record));
    }
    write_file(path, array.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    const std::string root = argc > 1 ? argv[1] : "fixtures";

    // Generated-source corpus: short dense path (40 tokens) plus 321 chords,
    // so the trained graph has far more edges than nodes. Fold means
    // 0.27 0.30 0.30 0.28 0.28 0.29; every test ratio inside [0.27, 0.30].
    PathCorpusSpec gpt;
    gpt.token_prefix = "g";
    gpt.token_digits = 2;
    gpt.n_tokens = 40;
    gpt.n_chords = 321;
    gpt.doc_words = 100;
    gpt.fold_bigram_means = {27, 30, 30, 28, 28, 29};
    gpt.test_bigrams = {28, 29};
    gpt.id_prefix = "GPT-SYN-";
    gpt.title_stem = "Synthetic generated abstract";
    write_corpus(root + "/gpt_alzheimers.json", build_path_corpus(gpt), /*gpt_ids=*/true);

    // Real-source corpora: long sparse path (413 tokens) with few chords, so
    // nodes/edges stays near one. Ratios use a 200-word denominator.
    PathCorpusSpec pub;
    pub.token_prefix = "p";
    pub.token_digits = 3;
    pub.n_tokens = 413;
    pub.n_chords = 60;
    pub.doc_words = 200;
    pub.fold_bigram_means = {30, 30, 28, 30, 28, 28};  // means .15 .15 .14 .15 .14 .14
    pub.test_bigrams = {29};                           // ratio 0.145
    pub.id_base = 90000000;
    pub.title_stem = "Synthetic indexed abstract";
    write_corpus(root + "/pubmed_alzheimers_2020_2024.json", build_path_corpus(pub),
                 /*gpt_ids=*/false);

    pub.fold_bigram_means = {32, 32, 30, 32, 30, 30};  // means .16 .16 .15 .16 .15 .15
    pub.test_bigrams = {31};                           // ratio 0.155
    pub.id_base = 91000000;
    write_corpus(root + "/pubmed_alzheimers_2015_2019.json", build_path_corpus(pub),
                 /*gpt_ids=*/false);

    // Plain ingestion corpus, 1513 records.
    {
        std::vector<Record> records;
        for (int i = 1; i <= 1513; ++i) {
            Record r;
            r.id = std::to_string(92000000 + i);
            r.title = "Depression cohort abstract " + zero_pad(i, 4);
            r.abstract_text = filler_abstract(i, 24 + (i * 5) % 17);
            records.push_back(std::move(r));
        }
        write_corpus(root + "/depression.json", records, /*gpt_ids=*/false);
    }

    // Recorded search response: 1243 records for the cancer query.
    {
        nlohmann::ordered_json body = nlohmann::ordered_json::array();
        for (int i = 1; i <= 1243; ++i) {
            nlohmann::ordered_json record;
            record["PMID"] = std::to_string(93000000 + i);
            record["Title"] = "Cancer cohort abstract " + zero_pad(i, 4);
            record["Abstract"] = filler_abstract(7000 + i, 22 + (i * 3) % 15);
            body.push_back(std::move(record));
        }
        nlohmann::ordered_json cassette;
        cassette["request"] = {{"method", "GET"},
                               {"url",
                                "http://pubmed.fixture/search"
                                "?query=cancer%20and%20co-morbidities"}};
        cassette["response"] = {{"status", 200}, {"body", std::move(body)}};
        write_file(root + "/remote/cancer_comorbidities.json", cassette.dump(2) + "\n");
    }

    // Chat-completion cassettes: three batches of 20 articles, abstracts
    // inside the 200-250 word instruction window.
    for (int batch = 0; batch < 3; ++batch) {
        nlohmann::ordered_json articles = nlohmann::ordered_json::array();
        for (int j = 1; j <= 20; ++j) {
            const int serial = batch * 20 + j;
            nlohmann::ordered_json article;
            article["GPT-ID"] = "GPT-A-" + zero_pad(serial, 3);
            article["Title"] = "Simulated Alzheimer study " + zero_pad(serial, 3);
            article["Abstract"] = filler_abstract(9000 + serial, 200 + (serial * 7) % 51);
            articles.push_back(std::move(article));
        }
        nlohmann::ordered_json envelope;
        envelope["id"] = "chatcmpl-fixture-" + zero_pad(batch + 1, 3);
        envelope["object"] = "chat.completion";
        envelope["model"] = "gpt-3.5-turbo-16k";
        envelope["choices"] = nlohmann::ordered_json::array(
            {{{"index", 0},
              {"message", {{"role", "assistant"}, {"content", articles.dump()}}},
              {"finish_reason", "stop"}}});

        nlohmann::ordered_json cassette;
        cassette["request"] = {{"method", "POST"},
                               {"url", "http://llm.fixture/v1/chat/completions"},
                               {"body_contains", "simulated research articles"}};
        cassette["response"] = {{"status", 200}, {"body", std::move(envelope)}};
        write_file(root + "/genclient/batch_" + zero_pad(batch + 1, 3) + ".json",
                   cassette.dump(2) + "\n");
    }

    std::printf("fixtures written under %s\n", root.c_str());
    return 0;
}
