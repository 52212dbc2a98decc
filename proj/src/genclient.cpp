#include "xfakesci/genclient.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace xfakesci {

namespace {

std::string display_name(Disease d) {
    switch (d) {
        case Disease::ALZHEIMERS: return "Alzheimer's";
        case Disease::CANCER: return "cancer";
        case Disease::DEPRESSION: return "depression";
    }
    return "";
}

std::string field_or_empty(const nlohmann::json& record, const char* key) {
    if (!record.contains(key) || !record[key].is_string()) return "";
    return record[key].get<std::string>();
}

// Accepts either the article array itself or a chat envelope wrapping it.
nlohmann::json unwrap_articles(const std::string& body) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedBatch(std::string("generation response is not JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("choices")) {
        const auto& choices = doc["choices"];
        if (!choices.is_array() || choices.empty())
            throw MalformedBatch("generation response has no choices");
        const auto& message = choices[0].value("message", nlohmann::json::object());
        if (!message.contains("content") || !message["content"].is_string())
            throw MalformedBatch("generation response choice has no message content");
        try {
            doc = nlohmann::json::parse(message["content"].get<std::string>());
        } catch (const nlohmann::json::parse_error& e) {
            throw MalformedBatch(std::string("generation content is not JSON: ") + e.what());
        }
    }
    if (!doc.is_array()) throw MalformedBatch("generation response is not a JSON array");
    return doc;
}

std::vector<GeneratedArticle> articles_from_array(const nlohmann::json& array,
                                                  const std::pair<int, int>& word_range) {
    std::vector<GeneratedArticle> articles;
    std::unordered_set<std::string> seen;
    for (const auto& record : array) {
        if (!record.is_object()) continue;
        GeneratedArticle article;
        article.gpt_id = field_or_empty(record, "GPT-ID");
        article.title = field_or_empty(record, "Title");
        article.abstract_text = field_or_empty(record, "Abstract");
        // A record missing a field fails alone; the batch survives.
        if (article.gpt_id.empty() || article.title.empty() || article.abstract_text.empty())
            continue;
        if (!seen.insert(article.gpt_id).second) continue;
        article.word_count = count_whitespace_tokens(article.abstract_text);
        article.word_count_in_range =
            article.word_count >= word_range.first && article.word_count <= word_range.second;
        articles.push_back(std::move(article));
    }
    return articles;
}

std::string batch_path(const std::string& batch_dir, int batch_index) {
    char name[32];
    std::snprintf(name, sizeof(name), "batch_%03d.json", batch_index + 1);
    return batch_dir + "/" + name;
}

}  // namespace

PromptSpec build_prompt(Disease disease, const PromptOverrides& overrides) {
    PromptSpec spec;
    spec.disease = disease;
    spec.article_number = overrides.article_number.value_or(20);
    spec.abstract_word_range = overrides.abstract_word_range.value_or(std::pair<int, int>{200, 250});

    const std::string name = display_name(disease);
    spec.system_role =
        "You are a biomedical researcher specialized in studying " + name + " disease.";
    spec.request_text = "Generate a list of " + std::to_string(spec.article_number) +
                        " simulated research articles about " + name +
                        " disease and its co-morbidities. Each article must have a GPT-ID, a "
                        "Title, and an Abstract. Each abstract must be between " +
                        std::to_string(spec.abstract_word_range.first) + "-" +
                        std::to_string(spec.abstract_word_range.second) + " words long.";
    spec.response_format_instruction =
        "Return the articles as an array list in a valid JSON format, where each element has "
        "the keys \"GPT-ID\", \"Title\", and \"Abstract\".";
    return spec;
}

std::vector<GeneratedArticle> generate_batch(const PromptSpec& spec, const EndpointConfig& endpoint,
                                             HttpTransport& transport) {
    nlohmann::ordered_json request;
    request["model"] = endpoint.model_name;
    request["messages"] = nlohmann::ordered_json::array(
        {{{"role", "system"}, {"content", spec.system_role}},
         {{"role", "user"}, {"content", spec.user_message()}}});

    HttpHeaders headers{{"Content-Type", "application/json"}};
    if (!endpoint.api_key.empty())
        headers.emplace_back("Authorization", "Bearer " + endpoint.api_key);

    HttpResponse response;
    int attempt = 0;
    for (;;) {
        try {
            response = transport.post(endpoint.base_url, request.dump(), headers);
            break;
        } catch (const TimeoutError&) {
            if (++attempt > endpoint.max_retries) throw;
        }
    }
    if (response.status < 200 || response.status >= 300)
        throw TransportError("generation endpoint returned status " +
                             std::to_string(response.status));
    return articles_from_array(unwrap_articles(response.body), spec.abstract_word_range);
}

GenerationOutcome generate_corpus(Disease disease, int total, const EndpointConfig& endpoint,
                                  HttpTransport& transport, const std::string& batch_dir,
                                  int batch_size) {
    if (total < 1) throw Error("generate_corpus: total must be at least 1");
    if (batch_size < 1) throw Error("generate_corpus: batch size must be at least 1");
    std::filesystem::create_directories(batch_dir);

    const int n_batches = (total + batch_size - 1) / batch_size;
    const std::pair<int, int> word_range =
        build_prompt(disease, {}).abstract_word_range;

    GenerationOutcome outcome;
    outcome.corpus.source = Source::GPT;
    outcome.corpus.disease = disease;

    std::unordered_set<std::string> seen_ids;
    for (int b = 0; b < n_batches; ++b) {
        const int this_batch = std::min(batch_size, total - b * batch_size);
        const std::string path = batch_path(batch_dir, b);

        std::vector<GeneratedArticle> articles;
        bool have_batch = false;
        if (std::filesystem::exists(path)) {
            // Resume path: a readable persisted batch is reused verbatim; a
            // corrupt one (crash mid-write) is re-requested.
            std::ifstream in(path, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            try {
                nlohmann::json array = nlohmann::json::parse(buf.str());
                if (array.is_array()) {
                    articles = articles_from_array(array, word_range);
                    have_batch = true;
                }
            } catch (const nlohmann::json::parse_error&) {
            }
        }
        if (!have_batch) {
            PromptOverrides overrides;
            overrides.article_number = this_batch;
            try {
                articles = generate_batch(build_prompt(disease, overrides), endpoint, transport);
            } catch (const Error& e) {
                outcome.manifest.push_back({b, e.what()});
                continue;
            }
            std::ofstream out(path, std::ios::binary);
            if (!out) throw Error("cannot persist batch file: " + path);
            out << articles_to_json(articles);
        }

        for (auto& article : articles) {
            if (!seen_ids.insert(article.gpt_id).second) continue;
            Document doc;
            doc.id = article.gpt_id;
            doc.title = article.title;
            doc.abstract_text = article.abstract_text;
            doc.source = Source::GPT;
            doc.disease = disease;
            doc.raw_word_count = article.word_count;
            outcome.corpus.documents.push_back(std::move(doc));
        }
    }
    return outcome;
}

std::string articles_to_json(const std::vector<GeneratedArticle>& articles) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& article : articles) {
        nlohmann::ordered_json record;
        record["GPT-ID"] = article.gpt_id;
        record["Title"] = article.title;
        record["Abstract"] = article.abstract_text;
        array.push_back(std::move(record));
    }
    return array.dump(2) + "\n";
}

}  // namespace xfakesci
