#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "xfakesci/genclient.hpp"

using namespace xfakesci;
using testutil::TempDir;

namespace {

std::string abstract_of(int words) {
    std::string text;
    for (int i = 0; i < words; ++i) {
        if (i) text += ' ';
        text += "w" + std::to_string(i % 7);
    }
    return text;
}

nlohmann::json make_records(int n, int first_serial, int words = 220) {
    nlohmann::json array = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        char id[32];
        std::snprintf(id, sizeof(id), "GPT-T-%03d", first_serial + i);
        array.push_back({{"GPT-ID", id},
                         {"Title", std::string("Generated study ") + id},
                         {"Abstract", abstract_of(words)}});
    }
    return array;
}

nlohmann::json chat_envelope(const nlohmann::json& records) {
    return {{"id", "chatcmpl-1"},
            {"object", "chat.completion"},
            {"choices", nlohmann::json::array({{{"index", 0},
                                                {"message", {{"role", "assistant"},
                                                             {"content", records.dump()}}}}})}};
}

// How many articles the prompt in a request body asks for.
int requested_articles(const std::string& body) {
    const std::string content =
        nlohmann::json::parse(body).at("messages").at(1).at("content").get<std::string>();
    const std::string marker = "Generate a list of ";
    const auto pos = content.find(marker);
    REQUIRE(pos != std::string::npos);
    return std::stoi(content.substr(pos + marker.size()));
}

EndpointConfig endpoint_config(const std::string& api_key = "") {
    EndpointConfig endpoint;
    endpoint.base_url = "http://llm.test/v1/chat/completions";
    endpoint.api_key = api_key;
    return endpoint;
}

// Minimal transport that records what generate_batch actually sends,
// including headers (CallbackTransport drops them).
struct RecordingTransport : HttpTransport {
    HttpResponse response{200, "[]"};
    std::string last_url, last_body;
    HttpHeaders last_headers;
    int posts = 0;

    HttpResponse get(const std::string&) override { throw TransportError("unexpected GET"); }
    HttpResponse post(const std::string& url, const std::string& body,
                      const HttpHeaders& headers) override {
        ++posts;
        last_url = url;
        last_body = body;
        last_headers = headers;
        return response;
    }
};

struct FlakyTransport : HttpTransport {
    int failures = 0;  // timeouts to throw before succeeding
    int calls = 0;
    std::string body = "[]";

    HttpResponse get(const std::string&) override { throw TransportError("unexpected GET"); }
    HttpResponse post(const std::string&, const std::string&, const HttpHeaders&) override {
        ++calls;
        if (calls <= failures) throw TimeoutError("simulated timeout");
        return {200, body};
    }
};

}  // namespace

TEST_CASE("the default prompt asks for 20 articles of 200-250 words") {
    const PromptSpec spec = build_prompt(Disease::ALZHEIMERS);
    CHECK(spec.article_number == 20);
    CHECK(spec.abstract_word_range == std::pair<int, int>{200, 250});
    CHECK(spec.system_role ==
          "You are a biomedical researcher specialized in studying Alzheimer's disease.");
    CHECK(spec.request_text.find("Generate a list of 20 simulated research articles about "
                                 "Alzheimer's disease and its co-morbidities") !=
          std::string::npos);
    CHECK(spec.request_text.find("between 200-250 words long") != std::string::npos);
    CHECK(spec.response_format_instruction.find("a valid JSON format") != std::string::npos);
    for (const char* key : {"GPT-ID", "Title", "Abstract"})
        CHECK(spec.response_format_instruction.find(key) != std::string::npos);
    CHECK(spec.user_message() ==
          spec.request_text + "\n" + spec.response_format_instruction);
}

TEST_CASE("prompt overrides change the counts, not the shape") {
    PromptOverrides overrides;
    overrides.article_number = 5;
    overrides.abstract_word_range = {100, 150};
    const PromptSpec spec = build_prompt(Disease::CANCER, overrides);
    CHECK(spec.article_number == 5);
    CHECK(spec.request_text.find("Generate a list of 5 simulated") != std::string::npos);
    CHECK(spec.request_text.find("between 100-150 words long") != std::string::npos);
    CHECK(spec.request_text.find("about cancer disease") != std::string::npos);
}

TEST_CASE("each disease gets its own display name in the prompt") {
    const PromptSpec alz = build_prompt(Disease::ALZHEIMERS);
    const PromptSpec can = build_prompt(Disease::CANCER);
    const PromptSpec dep = build_prompt(Disease::DEPRESSION);
    CHECK(can.system_role.find("studying cancer disease") != std::string::npos);
    CHECK(dep.system_role.find("studying depression disease") != std::string::npos);
    CHECK(alz.request_text != can.request_text);
    CHECK(can.request_text != dep.request_text);
    CHECK(alz.response_format_instruction == can.response_format_instruction);
}

TEST_CASE("generate_batch sends a chat request and parses a direct array") {
    RecordingTransport transport;
    transport.response = {200, make_records(20, 1).dump()};
    const auto articles =
        generate_batch(build_prompt(Disease::DEPRESSION), endpoint_config("sk-test-key"),
                       transport);

    REQUIRE(articles.size() == 20);
    CHECK(articles[0].gpt_id == "GPT-T-001");
    CHECK(articles[0].title == "Generated study GPT-T-001");
    CHECK(articles[0].word_count == 220);
    CHECK(articles[0].word_count_in_range);

    CHECK(transport.posts == 1);
    CHECK(transport.last_url == "http://llm.test/v1/chat/completions");
    const auto request = nlohmann::json::parse(transport.last_body);
    CHECK(request.at("model") == "gpt-3.5-turbo-16k");
    CHECK(request.at("messages").size() == 2);
    CHECK(request.at("messages").at(0).at("role") == "system");
    CHECK(request.at("messages").at(1).at("role") == "user");
    CHECK(requested_articles(transport.last_body) == 20);
}

TEST_CASE("the api key travels in the Authorization header and nowhere else") {
    RecordingTransport transport;
    transport.response = {200, make_records(1, 1).dump()};
    generate_batch(build_prompt(Disease::CANCER), endpoint_config("sk-secret-123"), transport);

    bool authorization_seen = false;
    for (const auto& [key, value] : transport.last_headers) {
        if (key == "Authorization") {
            authorization_seen = true;
            CHECK(value == "Bearer sk-secret-123");
        }
    }
    CHECK(authorization_seen);
    CHECK(transport.last_body.find("sk-secret-123") == std::string::npos);

    // Without a key there is no Authorization header at all.
    RecordingTransport anonymous;
    anonymous.response = {200, "[]"};
    generate_batch(build_prompt(Disease::CANCER), endpoint_config(), anonymous);
    for (const auto& [key, value] : anonymous.last_headers) CHECK(key != "Authorization");
}

TEST_CASE("generate_batch unwraps a chat envelope") {
    RecordingTransport transport;
    transport.response = {200, chat_envelope(make_records(3, 7)).dump()};
    const auto articles =
        generate_batch(build_prompt(Disease::ALZHEIMERS), endpoint_config(), transport);
    REQUIRE(articles.size() == 3);
    CHECK(articles[2].gpt_id == "GPT-T-009");
}

TEST_CASE("malformed generation responses are rejected as a batch") {
    const auto attempt = [](const std::string& body) {
        RecordingTransport transport;
        transport.response = {200, body};
        return generate_batch(build_prompt(Disease::CANCER), endpoint_config(), transport);
    };
    CHECK_THROWS_AS(attempt("[{\"GPT-ID\": \"trunc"), MalformedBatch);
    CHECK_THROWS_AS(attempt("{\"count\": 3}"), MalformedBatch);
    CHECK_THROWS_AS(attempt("{\"choices\": []}"), MalformedBatch);
    CHECK_THROWS_AS(attempt("{\"choices\": [{\"message\": {\"content\": 5}}]}"), MalformedBatch);
    CHECK_THROWS_AS(attempt("{\"choices\": [{\"message\": {\"content\": \"not json\"}}]}"),
                    MalformedBatch);
}

TEST_CASE("a record missing a field fails alone, not the batch") {
    nlohmann::json records = make_records(3, 1);
    records.push_back({{"GPT-ID", "GPT-T-900"}, {"Title", "no abstract"}});
    records.push_back({{"Title", "no id"}, {"Abstract", abstract_of(210)}});
    records.push_back("just a string");
    records.push_back(make_records(1, 50)[0]);

    RecordingTransport transport;
    transport.response = {200, records.dump()};
    const auto articles =
        generate_batch(build_prompt(Disease::DEPRESSION), endpoint_config(), transport);
    REQUIRE(articles.size() == 4);
    CHECK(articles[3].gpt_id == "GPT-T-050");
}

TEST_CASE("a duplicate gpt id within a batch is dropped") {
    nlohmann::json records = make_records(2, 1);
    records.push_back(records[0]);
    RecordingTransport transport;
    transport.response = {200, records.dump()};
    const auto articles =
        generate_batch(build_prompt(Disease::CANCER), endpoint_config(), transport);
    CHECK(articles.size() == 2);
}

TEST_CASE("an out-of-range abstract is kept but flagged") {
    nlohmann::json records = make_records(1, 1, 180);
    records.push_back(make_records(1, 2, 250)[0]);
    records.push_back(make_records(1, 3, 251)[0]);
    RecordingTransport transport;
    transport.response = {200, records.dump()};
    const auto articles =
        generate_batch(build_prompt(Disease::CANCER), endpoint_config(), transport);
    REQUIRE(articles.size() == 3);
    CHECK(articles[0].word_count == 180);
    CHECK_FALSE(articles[0].word_count_in_range);
    CHECK(articles[1].word_count_in_range);  // 250 is the inclusive upper bound
    CHECK_FALSE(articles[2].word_count_in_range);
}

TEST_CASE("a non-2xx status is a transport failure that never leaks the key") {
    RecordingTransport transport;
    transport.response = {500, "upstream exploded"};
    try {
        generate_batch(build_prompt(Disease::CANCER), endpoint_config("sk-secret-123"),
                       transport);
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(std::string(e.what()).find("500") != std::string::npos);
        CHECK(std::string(e.what()).find("sk-secret-123") == std::string::npos);
    }
}

TEST_CASE("timeouts are retried up to the limit") {
    FlakyTransport twice;
    twice.failures = 2;
    twice.body = make_records(2, 1).dump();
    const auto articles =
        generate_batch(build_prompt(Disease::CANCER), endpoint_config(), twice);
    CHECK(articles.size() == 2);
    CHECK(twice.calls == 3);

    FlakyTransport always;
    always.failures = 1 << 20;
    CHECK_THROWS_AS(generate_batch(build_prompt(Disease::CANCER), endpoint_config(), always),
                    TimeoutError);
    CHECK(always.calls == 4);  // initial try plus max_retries
}

TEST_CASE("generate_corpus splits the total into persisted batches") {
    TempDir dir("gen_batches");
    std::vector<int> asked;
    int serial = 1;
    CallbackTransport transport([&](const std::string&, const std::string&,
                                    const std::string& body) {
        const int n = requested_articles(body);
        asked.push_back(n);
        const auto records = make_records(n, serial);
        serial += n;
        return HttpResponse{200, chat_envelope(records).dump()};
    });

    const GenerationOutcome outcome =
        generate_corpus(Disease::DEPRESSION, 56, endpoint_config(), transport, dir.str(), 20);
    CHECK_FALSE(outcome.partial());
    CHECK(outcome.corpus.documents.size() == 56);
    CHECK(outcome.corpus.source == Source::GPT);
    CHECK(asked == std::vector<int>{20, 20, 16});

    for (const char* name : {"batch_001.json", "batch_002.json", "batch_003.json"}) {
        const std::string text = testutil::read_file(dir.file(name));
        const auto parsed = nlohmann::json::parse(text);
        REQUIRE(parsed.is_array());
    }
    CHECK(nlohmann::json::parse(testutil::read_file(dir.file("batch_003.json"))).size() == 16);
    CHECK_FALSE(std::filesystem::exists(dir.file("batch_004.json")));
}

TEST_CASE("existing batch files are reused without touching the network") {
    TempDir dir("gen_resume");
    int serial = 1;
    CallbackTransport first_run([&](const std::string&, const std::string&,
                                    const std::string& body) {
        const int n = requested_articles(body);
        const auto records = make_records(n, serial);
        serial += n;
        return HttpResponse{200, records.dump()};
    });
    const auto original =
        generate_corpus(Disease::CANCER, 40, endpoint_config(), first_run, dir.str(), 20);
    REQUIRE(original.corpus.documents.size() == 40);
    const std::string bytes_1 = testutil::read_file(dir.file("batch_001.json"));
    const std::string bytes_2 = testutil::read_file(dir.file("batch_002.json"));

    int resumed_calls = 0;
    CallbackTransport offline([&](const std::string&, const std::string&, const std::string&) {
        ++resumed_calls;
        return HttpResponse{503, "should not be reached"};
    });
    const auto resumed =
        generate_corpus(Disease::CANCER, 40, endpoint_config(), offline, dir.str(), 20);
    CHECK(resumed_calls == 0);
    CHECK_FALSE(resumed.partial());
    REQUIRE(resumed.corpus.documents.size() == 40);
    for (std::size_t i = 0; i < 40; ++i)
        CHECK(resumed.corpus.documents[i].id == original.corpus.documents[i].id);
    CHECK(testutil::read_file(dir.file("batch_001.json")) == bytes_1);
    CHECK(testutil::read_file(dir.file("batch_002.json")) == bytes_2);
}

TEST_CASE("a corrupt batch file is re-requested, intact neighbors are not") {
    TempDir dir("gen_corrupt");
    testutil::write_file(dir.file("batch_001.json"), make_records(20, 1).dump());
    testutil::write_file(dir.file("batch_002.json"), "[{\"GPT-ID\": \"GPT-T-crash");

    int calls = 0;
    CallbackTransport transport([&](const std::string&, const std::string&,
                                    const std::string& body) {
        ++calls;
        CHECK(requested_articles(body) == 20);
        return HttpResponse{200, make_records(20, 100).dump()};
    });
    const auto outcome =
        generate_corpus(Disease::CANCER, 40, endpoint_config(), transport, dir.str(), 20);
    CHECK(calls == 1);
    CHECK(outcome.corpus.documents.size() == 40);
    // The rewritten file is now valid.
    CHECK(nlohmann::json::parse(testutil::read_file(dir.file("batch_002.json"))).size() == 20);
}

TEST_CASE("a failed batch lands in the manifest and the rest survive") {
    TempDir dir("gen_partial");
    int serial = 1, call = 0;
    CallbackTransport transport([&](const std::string&, const std::string&,
                                    const std::string& body) {
        ++call;
        if (call == 2) return HttpResponse{502, "bad gateway"};
        const int n = requested_articles(body);
        const auto records = make_records(n, serial);
        serial += n;
        return HttpResponse{200, records.dump()};
    });

    const auto outcome =
        generate_corpus(Disease::DEPRESSION, 60, endpoint_config(), transport, dir.str(), 20);
    CHECK(outcome.partial());
    REQUIRE(outcome.manifest.size() == 1);
    CHECK(outcome.manifest[0].batch_index == 1);
    CHECK(outcome.manifest[0].message.find("502") != std::string::npos);
    CHECK(outcome.corpus.documents.size() == 40);
    CHECK(std::filesystem::exists(dir.file("batch_001.json")));
    CHECK_FALSE(std::filesystem::exists(dir.file("batch_002.json")));
    CHECK(std::filesystem::exists(dir.file("batch_003.json")));
}

TEST_CASE("gpt ids are deduplicated across batches") {
    TempDir dir("gen_dedup");
    CallbackTransport transport([&](const std::string&, const std::string&, const std::string&) {
        return HttpResponse{200, make_records(20, 1).dump()};  // same ids every time
    });
    const auto outcome =
        generate_corpus(Disease::CANCER, 40, endpoint_config(), transport, dir.str(), 20);
    CHECK_FALSE(outcome.partial());
    CHECK(outcome.corpus.documents.size() == 20);
}

TEST_CASE("generate_corpus validates its counts") {
    TempDir dir("gen_args");
    CallbackTransport transport([](const std::string&, const std::string&, const std::string&) {
        return HttpResponse{200, "[]"};
    });
    CHECK_THROWS_AS(generate_corpus(Disease::CANCER, 0, endpoint_config(), transport, dir.str()),
                    Error);
    CHECK_THROWS_AS(
        generate_corpus(Disease::CANCER, 10, endpoint_config(), transport, dir.str(), 0), Error);
}

TEST_CASE("the recorded generation cassettes replay a full corpus offline") {
    TempDir dir("gen_fixture");
    FixtureTransport transport(testutil::fixture_path("genclient"));
    EndpointConfig endpoint = endpoint_config("sk-offline-unused");
    endpoint.base_url = "http://llm.fixture/v1/chat/completions";

    const auto outcome =
        generate_corpus(Disease::DEPRESSION, 60, endpoint, transport, dir.str(), 20);
    CHECK_FALSE(outcome.partial());
    REQUIRE(outcome.corpus.documents.size() == 60);
    for (const auto& doc : outcome.corpus.documents) {
        CHECK(doc.id.rfind("GPT-A-", 0) == 0);
        CHECK(doc.raw_word_count >= 200);
        CHECK(doc.raw_word_count <= 250);
    }
}

TEST_CASE("no output file or error ever contains the api key") {
    TempDir dir("gen_hygiene");
    const std::string key = "sk-secret-123";
    int serial = 1;
    CallbackTransport transport([&](const std::string&, const std::string&,
                                    const std::string& body) {
        CHECK(body.find(key) == std::string::npos);
        const int n = requested_articles(body);
        const auto records = make_records(n, serial);
        serial += n;
        return HttpResponse{200, records.dump()};
    });
    const auto outcome =
        generate_corpus(Disease::DEPRESSION, 40, endpoint_config(key), transport, dir.str(), 20);

    for (const auto& entry : std::filesystem::directory_iterator(dir.path)) {
        const std::string text = testutil::read_file(entry.path().string());
        CHECK(text.find(key) == std::string::npos);
    }
    std::vector<GeneratedArticle> articles;
    for (const auto& doc : outcome.corpus.documents)
        articles.push_back({doc.id, doc.title, doc.abstract_text, doc.raw_word_count, true});
    CHECK(articles_to_json(articles).find(key) == std::string::npos);
}

TEST_CASE("articles_to_json emits records load_corpus accepts") {
    const std::vector<GeneratedArticle> articles = {
        {"GPT-9", "A generated study", "Condition worsens. Memory declines.", 5, true}};
    const std::string text = articles_to_json(articles);
    TempDir dir("gen_roundtrip");
    testutil::write_file(dir.file("gpt.json"), text);
    const Corpus corpus =
        load_corpus(dir.file("gpt.json"), Source::GPT, Disease::ALZHEIMERS);
    REQUIRE(corpus.documents.size() == 1);
    CHECK(corpus.documents[0].id == "GPT-9");
    CHECK(corpus.documents[0].title == "A generated study");
}
