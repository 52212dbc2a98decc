#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xfakesci/corpus.hpp"
#include "xfakesci/transport.hpp"

namespace xfakesci {

struct PromptSpec {
    Disease disease = Disease::ALZHEIMERS;
    int article_number = 20;
    std::pair<int, int> abstract_word_range{200, 250};
    std::string system_role;
    std::string request_text;
    std::string response_format_instruction;

    std::string user_message() const { return request_text + "\n" + response_format_instruction; }
};

struct GeneratedArticle {
    std::string gpt_id;
    std::string title;
    std::string abstract_text;
    int word_count = 0;
    bool word_count_in_range = true;  // out-of-range abstracts are kept, flagged
};

struct EndpointConfig {
    std::string base_url;
    std::string model_name = "gpt-3.5-turbo-16k";
    std::string api_key;  // from the environment; never logged or persisted
    std::chrono::milliseconds timeout{30000};
    int max_retries = 3;
};

struct PromptOverrides {
    std::optional<int> article_number;
    std::optional<std::pair<int, int>> abstract_word_range;
};

struct BatchFailure {
    int batch_index = 0;
    std::string message;
};

struct GenerationOutcome {
    Corpus corpus;
    std::vector<BatchFailure> manifest;

    bool partial() const { return !manifest.empty(); }
};

PromptSpec build_prompt(Disease disease, const PromptOverrides& overrides = {});

// POSTs a chat-completion request and parses the response into articles.
// The body may be the article array itself or a chat envelope whose first
// choice's message content holds the array. Records missing a field fail
// individually; timeouts are retried up to max_retries.
std::vector<GeneratedArticle> generate_batch(const PromptSpec& spec, const EndpointConfig& endpoint,
                                             HttpTransport& transport);

// Issues ceil(total / batch) batches, persisting each raw batch under
// batch_dir before assembly. Existing batch files are reused, so an
// interrupted run resumes without re-requesting. gpt_ids are deduplicated
// across batches; failed batches land in the manifest instead of aborting.
GenerationOutcome generate_corpus(Disease disease, int total, const EndpointConfig& endpoint,
                                  HttpTransport& transport, const std::string& batch_dir,
                                  int batch_size = 20);

// The record format load_corpus consumes (keys GPT-ID / Title / Abstract).
std::string articles_to_json(const std::vector<GeneratedArticle>& articles);

}  // namespace xfakesci
