#include "xfakesci/transport.hpp"

#include <httplib.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace xfakesci {

std::string url_encode(const std::string& text) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        const bool unreserved = std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~';
        if (unreserved) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

namespace {

// scheme://host[:port]/path... -> (scheme://host[:port], /path...)
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("malformed url: " + url);
    const auto path_begin = url.find('/', scheme_end + 3);
    if (path_begin == std::string::npos) return {url, "/"};
    return {url.substr(0, path_begin), url.substr(path_begin)};
}

HttpResponse to_response(const httplib::Result& result, const std::string& url) {
    if (!result) {
        const auto err = result.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write)
            throw TimeoutError("request to " + url + " timed out: " + httplib::to_string(err));
        throw TransportError("request to " + url + " failed: " + httplib::to_string(err));
    }
    return HttpResponse{result->status, result->body};
}

}  // namespace

LiveTransport::LiveTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

HttpResponse LiveTransport::get(const std::string& url) {
    auto [origin, path] = split_url(url);
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    return to_response(client.Get(path), url);
}

HttpResponse LiveTransport::post(const std::string& url, const std::string& body,
                                 const HttpHeaders& headers) {
    auto [origin, path] = split_url(url);
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    httplib::Headers hl;
    for (const auto& [k, v] : headers) hl.emplace(k, v);
    return to_response(client.Post(path, hl, body, "application/json"), url);
}

FixtureTransport::FixtureTransport(const std::string& directory) : directory_(directory) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) throw TransportError("fixture directory not found: " + directory);

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(directory))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(buf.str());
        } catch (const nlohmann::json::parse_error& e) {
            throw TransportError("bad fixture file " + file + ": " + e.what());
        }
        Recording rec;
        rec.file = file;
        const auto& req = parsed.at("request");
        rec.method = req.value("method", "GET");
        rec.url = req.value("url", "");
        rec.body = req.value("body", "");
        rec.body_contains = req.value("body_contains", "");
        const auto& res = parsed.at("response");
        rec.response.status = res.value("status", 200);
        const auto& body = res.at("body");
        rec.response.body = body.is_string() ? body.get<std::string>() : body.dump();
        recordings_.push_back(std::move(rec));
    }
}

HttpResponse FixtureTransport::dispatch(const std::string& method, const std::string& url,
                                        const std::string& body) {
    for (auto& rec : recordings_) {
        if (rec.consumed) continue;
        if (rec.method != method) continue;
        if (!rec.url.empty() && rec.url != url) continue;
        if (!rec.body.empty() && rec.body != body) continue;
        if (!rec.body_contains.empty() && body.find(rec.body_contains) == std::string::npos) continue;
        rec.consumed = true;
        return rec.response;
    }
    throw TransportError("no unconsumed fixture in " + directory_ + " matches " + method + " " + url);
}

HttpResponse FixtureTransport::get(const std::string& url) {
    return dispatch("GET", url, "");
}

HttpResponse FixtureTransport::post(const std::string& url, const std::string& body,
                                    const HttpHeaders& headers) {
    (void)headers;
    return dispatch("POST", url, body);
}

}  // namespace xfakesci
