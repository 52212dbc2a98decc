#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <utility>
#include <vector>

// nlohmann/json is vendored as a single header under vendor/.
#include <json.hpp>

#include "xfakesci/errors.hpp"

namespace xfakesci {

struct HttpResponse {
    int status = 0;
    std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class HttpTransport {
  public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse get(const std::string& url) = 0;
    virtual HttpResponse post(const std::string& url, const std::string& body,
                              const HttpHeaders& headers) = 0;
};

// Real HTTP via cpp-httplib. Plain http only; the offline transports below
// are what tests and CI use.
class LiveTransport : public HttpTransport {
  public:
    explicit LiveTransport(std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));
    HttpResponse get(const std::string& url) override;
    HttpResponse post(const std::string& url, const std::string& body,
                      const HttpHeaders& headers) override;

  private:
    std::chrono::milliseconds timeout_;
};

// Replays recorded request/response pairs from a directory of JSON files.
// Each file holds {"request": {"method", "url", "body" | "body_contains"},
// "response": {"status", "body"}}; "body" matches exactly, "body_contains"
// as substring. Files are consumed in filename order, each at most once, so
// repeated identical requests walk through successive recordings.
class FixtureTransport : public HttpTransport {
  public:
    explicit FixtureTransport(const std::string& directory);
    HttpResponse get(const std::string& url) override;
    HttpResponse post(const std::string& url, const std::string& body,
                      const HttpHeaders& headers) override;

  private:
    struct Recording {
        std::string file;
        std::string method;
        std::string url;
        std::string body;           // exact match when non-empty
        std::string body_contains;  // substring match when non-empty
        HttpResponse response;
        bool consumed = false;
    };
    HttpResponse dispatch(const std::string& method, const std::string& url,
                          const std::string& body);
    std::vector<Recording> recordings_;
    std::string directory_;
};

// Test double driven by a callback.
class CallbackTransport : public HttpTransport {
  public:
    using Handler = std::function<HttpResponse(const std::string& method, const std::string& url,
                                               const std::string& body)>;
    explicit CallbackTransport(Handler handler) : handler_(std::move(handler)) {}
    HttpResponse get(const std::string& url) override { return handler_("GET", url, ""); }
    HttpResponse post(const std::string& url, const std::string& body,
                      const HttpHeaders& headers) override {
        (void)headers;
        return handler_("POST", url, body);
    }

  private:
    Handler handler_;
};

std::string url_encode(const std::string& text);

}  // namespace xfakesci
