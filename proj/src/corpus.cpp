#include "xfakesci/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace xfakesci {

std::string to_string(Source s) {
    return s == Source::PUBMED ? "PUBMED" : "GPT";
}

std::string to_string(Disease d) {
    switch (d) {
        case Disease::ALZHEIMERS: return "alzheimers";
        case Disease::CANCER: return "cancer";
        case Disease::DEPRESSION: return "depression";
    }
    return "";
}

std::string to_string(Period p) {
    switch (p) {
        case Period::P2010_2014: return "2010-2014";
        case Period::P2015_2019: return "2015-2019";
        case Period::P2020_2024: return "2020-2024";
    }
    return "";
}

Source parse_source(const std::string& s) {
    if (s == "PUBMED" || s == "pubmed") return Source::PUBMED;
    if (s == "GPT" || s == "gpt") return Source::GPT;
    throw Error("unknown source: " + s);
}

Disease parse_disease(const std::string& s) {
    if (s == "alzheimers") return Disease::ALZHEIMERS;
    if (s == "cancer") return Disease::CANCER;
    if (s == "depression") return Disease::DEPRESSION;
    throw Error("unknown disease: " + s);
}

Period parse_period(const std::string& s) {
    if (s == "2010-2014") return Period::P2010_2014;
    if (s == "2015-2019") return Period::P2015_2019;
    if (s == "2020-2024") return Period::P2020_2024;
    throw Error("unknown period: " + s);
}

int count_whitespace_tokens(const std::string& text) {
    int count = 0;
    bool in_token = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++count;
        }
    }
    return count;
}

namespace {

// Mirrors data/stopwords.txt; test_corpus asserts the two stay in sync.
constexpr const char* kStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
    "are", "as", "at", "be", "because", "been", "before", "being", "below", "between",
    "both", "but", "by", "can", "cannot", "could", "did", "do", "does", "doing", "down",
    "during", "each", "few", "for", "from", "further", "had", "has", "have", "having",
    "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
    "in", "into", "is", "it", "its", "itself", "me", "more", "most", "my", "myself",
    "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other", "ought",
    "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so",
    "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves",
    "then", "there", "these", "they", "this", "those", "through", "to", "too", "under",
    "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
    "while", "who", "whom", "why", "with", "would", "you", "your", "yours", "yourself",
    "yourselves",
};

}  // namespace

const StopwordSet& default_stopwords() {
    static const StopwordSet set(std::begin(kStopwords), std::end(kStopwords));
    return set;
}

StopwordSet load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stopword file: " + path);
    StopwordSet set;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty()) set.insert(line);
    }
    if (set.empty()) throw Error("stopword file is empty: " + path);
    return set;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string string_field(const nlohmann::json& record, const char* key) {
    auto it = record.find(key);
    if (it == record.end() || !it->is_string()) return "";
    return it->get<std::string>();
}

}  // namespace

Corpus load_corpus(const std::string& path, Source source, Disease disease,
                   std::optional<Period> period) {
    const std::string text = read_file(path);
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedJson(path + ": " + e.what());
    }
    if (!parsed.is_array()) throw MalformedJson(path + ": expected a JSON array of records");
    if (parsed.empty()) throw EmptyCorpus(path + ": zero records");

    Corpus corpus;
    corpus.source = source;
    corpus.disease = disease;
    corpus.period = period;
    corpus.documents.reserve(parsed.size());

    std::unordered_set<std::string> seen_ids;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        const auto& record = parsed[i];
        if (!record.is_object()) throw MalformedJson(path + ": record " + std::to_string(i) + " is not an object");

        std::string id = string_field(record, "PMID");
        if (id.empty()) id = string_field(record, "GPT-ID");
        if (id.empty()) throw MissingField(i, "PMID/GPT-ID");

        const std::string title = string_field(record, "Title");
        if (title.empty()) throw MissingField(i, "Title");
        const std::string abstract_text = string_field(record, "Abstract");
        if (abstract_text.empty()) throw MissingField(i, "Abstract");

        if (!seen_ids.insert(id).second)
            throw MalformedJson(path + ": duplicate id \"" + id + "\" at record " + std::to_string(i));

        Document doc;
        doc.id = id;
        doc.title = title;
        doc.abstract_text = abstract_text;
        doc.source = source;
        doc.disease = disease;
        doc.period = period;
        doc.raw_word_count = count_whitespace_tokens(abstract_text);
        corpus.documents.push_back(std::move(doc));
    }
    return corpus;
}

namespace {

bool is_terminal(char c) {
    return c == '.' || c == '!' || c == '?';
}

void tokenize_into(const std::string& text, const StopwordSet& stopwords,
                   std::vector<std::vector<std::string>>& sentences) {
    std::vector<std::string> tokens;
    std::string word;

    auto flush_word = [&] {
        if (word.empty()) return;
        // Strip leading/trailing punctuation, lowercase the rest.
        std::size_t begin = 0, end = word.size();
        while (begin < end && std::ispunct(static_cast<unsigned char>(word[begin]))) ++begin;
        while (end > begin && std::ispunct(static_cast<unsigned char>(word[end - 1]))) --end;
        std::string token = word.substr(begin, end - begin);
        word.clear();
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (token.empty() || stopwords.count(token)) return;
        tokens.push_back(std::move(token));
    };
    auto flush_sentence = [&] {
        flush_word();
        if (!tokens.empty()) sentences.push_back(std::move(tokens));
        tokens.clear();
    };

    for (char c : text) {
        if (is_terminal(c)) {
            flush_sentence();
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            flush_word();
        } else {
            word.push_back(c);
        }
    }
    flush_sentence();
}

}  // namespace

TokenizedDoc preprocess(const Document& doc, const StopwordSet& stopwords, bool include_title) {
    if (stopwords.empty()) throw Error("preprocess: empty stopword set");
    TokenizedDoc out;
    out.doc_id = doc.id;
    out.raw_word_count = doc.raw_word_count;
    if (include_title) tokenize_into(doc.title, stopwords, out.sentences);
    tokenize_into(doc.abstract_text, stopwords, out.sentences);
    return out;
}

std::vector<TokenizedDoc> preprocess_all(const std::vector<Document>& docs,
                                         const StopwordSet& stopwords, bool include_title) {
    std::vector<TokenizedDoc> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) out.push_back(preprocess(doc, stopwords, include_title));
    return out;
}

SplitPlan split_corpus(const Corpus& corpus, int train_size, int fold_size) {
    if (train_size < 1 || fold_size < 1)
        throw Error("split_corpus: train_size and fold_size must be positive");
    const auto& docs = corpus.documents;
    const std::size_t needed = static_cast<std::size_t>(train_size) + static_cast<std::size_t>(fold_size);
    if (docs.size() < needed)
        throw InsufficientDocuments("need " + std::to_string(needed) + " documents for a train set plus one fold, have " +
                                    std::to_string(docs.size()));

    SplitPlan plan;
    plan.train.assign(docs.begin(), docs.begin() + train_size);
    std::size_t pos = static_cast<std::size_t>(train_size);
    while (docs.size() - pos >= static_cast<std::size_t>(fold_size)) {
        plan.folds.emplace_back(docs.begin() + pos, docs.begin() + pos + fold_size);
        pos += static_cast<std::size_t>(fold_size);
    }
    plan.test.assign(docs.begin() + pos, docs.end());
    return plan;
}

std::vector<nlohmann::json> fetch_remote(const std::string& query, std::optional<Period> period,
                                         const std::string& endpoint, HttpTransport& transport) {
    std::string url = endpoint + "?query=" + url_encode(query);
    if (period) url += "&period=" + url_encode(to_string(*period));

    const HttpResponse response = transport.get(url);
    if (response.status < 200 || response.status >= 300)
        throw TransportError("remote endpoint returned status " + std::to_string(response.status));

    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(response.body);
    } catch (const nlohmann::json::parse_error&) {
        throw NonJsonResponse("remote endpoint did not return JSON");
    }
    if (!parsed.is_array()) throw NonJsonResponse("remote endpoint did not return a JSON array");

    std::vector<nlohmann::json> records;
    records.reserve(parsed.size());
    for (auto& record : parsed) records.push_back(std::move(record));
    return records;
}

}  // namespace xfakesci
