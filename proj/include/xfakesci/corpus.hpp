#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "xfakesci/errors.hpp"
#include "xfakesci/transport.hpp"

namespace xfakesci {

enum class Source { PUBMED, GPT };
enum class Disease { ALZHEIMERS, CANCER, DEPRESSION };
enum class Period { P2010_2014, P2015_2019, P2020_2024 };

std::string to_string(Source s);
std::string to_string(Disease d);
std::string to_string(Period p);
Source parse_source(const std::string& s);
Disease parse_disease(const std::string& s);
Period parse_period(const std::string& s);

// One abstract record. raw_word_count is the whitespace-token count of the
// raw abstract, stopwords included; it is the ratio denominator downstream.
struct Document {
    std::string id;
    std::string title;
    std::string abstract_text;
    Source source = Source::PUBMED;
    Disease disease = Disease::ALZHEIMERS;
    std::optional<Period> period;
    int raw_word_count = 0;
};

struct Corpus {
    std::vector<Document> documents;
    Source source = Source::PUBMED;
    Disease disease = Disease::ALZHEIMERS;
    std::optional<Period> period;
};

// Positional partition: first `train_size` documents, then full folds of
// `fold_size`, then whatever trails as the test pool.
struct SplitPlan {
    std::vector<Document> train;
    std::vector<std::vector<Document>> folds;
    std::vector<Document> test;
};

// Sentence-split, lowercased, punctuation-stripped, stopword-filtered tokens.
struct TokenizedDoc {
    std::vector<std::vector<std::string>> sentences;
    std::string doc_id;
    int raw_word_count = 0;

    int total_tokens() const {
        int n = 0;
        for (const auto& s : sentences) n += static_cast<int>(s.size());
        return n;
    }
};

using StopwordSet = std::unordered_set<std::string>;

int count_whitespace_tokens(const std::string& text);

// The list shipped in data/stopwords.txt, compiled in so the binaries work
// without a data directory.
const StopwordSet& default_stopwords();
StopwordSet load_stopwords(const std::string& path);

// Accepts a JSON array of records with keys among {PMID, GPT-ID, Title,
// Abstract}; either id key is accepted. File order is preserved.
Corpus load_corpus(const std::string& path, Source source, Disease disease,
                   std::optional<Period> period = std::nullopt);

// Sentences split on terminal . ! ?; tokens lowercased with leading/trailing
// punctuation stripped; stopwords and empty tokens dropped. When
// include_title is set the title is prepended as its own sentence.
TokenizedDoc preprocess(const Document& doc, const StopwordSet& stopwords,
                        bool include_title = false);

std::vector<TokenizedDoc> preprocess_all(const std::vector<Document>& docs,
                                         const StopwordSet& stopwords,
                                         bool include_title = false);

SplitPlan split_corpus(const Corpus& corpus, int train_size = 100, int fold_size = 100);

// GET {endpoint}?query=...&period=... and hand back the raw records. The
// caller persists them and re-reads through load_corpus.
std::vector<nlohmann::json> fetch_remote(const std::string& query,
                                         std::optional<Period> period,
                                         const std::string& endpoint,
                                         HttpTransport& transport);

}  // namespace xfakesci
