#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "xfakesci/corpus.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(XFAKESCI_FIXTURE_DIR) + "/" + name;
}

inline std::string data_path(const std::string& name) {
    return std::string(XFAKESCI_DATA_DIR) + "/" + name;
}

// A unique writable directory, removed when the object goes out of scope.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("xfakesci_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::string str() const { return path.string(); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// TokenizedDoc straight from sentences, bypassing text parsing, for tests
// that engineer exact bigram sets.
inline xfakesci::TokenizedDoc tokdoc(std::vector<std::vector<std::string>> sentences,
                                     int raw_word_count, std::string id = "doc") {
    xfakesci::TokenizedDoc doc;
    doc.sentences = std::move(sentences);
    doc.raw_word_count = raw_word_count;
    doc.doc_id = std::move(id);
    return doc;
}

inline xfakesci::Document document(const std::string& id, const std::string& abstract_text,
                                   const std::string& title = "title") {
    xfakesci::Document doc;
    doc.id = id;
    doc.title = title;
    doc.abstract_text = abstract_text;
    doc.raw_word_count = xfakesci::count_whitespace_tokens(abstract_text);
    return doc;
}

}  // namespace testutil
