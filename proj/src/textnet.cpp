#include "xfakesci/textnet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace xfakesci {

EdgeKey make_edge_key(const std::string& s, const std::string& t) {
    return s <= t ? EdgeKey{s, t} : EdgeKey{t, s};
}

double IdfTable::idf_of(const Bigram& bigram) const {
    auto it = entries.find(bigram);
    if (it != entries.end()) return it->second.idf;
    return std::log(static_cast<double>(n_docs));  // unseen: df = 0
}

std::set<Bigram> distinct_bigrams(const TokenizedDoc& doc) {
    std::set<Bigram> bigrams;
    for (const auto& sentence : doc.sentences)
        for (std::size_t i = 0; i + 1 < sentence.size(); ++i)
            bigrams.emplace(sentence[i], sentence[i + 1]);
    return bigrams;
}

IdfTable compute_idf(const std::vector<TokenizedDoc>& docs) {
    if (docs.empty()) throw Error("compute_idf: no documents");
    IdfTable table;
    table.n_docs = static_cast<int>(docs.size());
    for (const auto& doc : docs)
        for (const auto& bigram : distinct_bigrams(doc)) table.entries[bigram].df += 1;
    const double n = static_cast<double>(table.n_docs);
    for (auto& [bigram, entry] : table.entries) entry.idf = std::log(n / (1.0 + entry.df));
    return table;
}

std::vector<BigramFeature> extract_bigrams(const TokenizedDoc& doc, const IdfTable& idf) {
    const int total = doc.total_tokens();
    std::map<Bigram, int> occurrences;
    for (const auto& sentence : doc.sentences)
        for (std::size_t i = 0; i + 1 < sentence.size(); ++i)
            occurrences[{sentence[i], sentence[i + 1]}] += 1;

    std::vector<BigramFeature> features;
    features.reserve(occurrences.size());
    for (const auto& [bigram, count] : occurrences) {
        BigramFeature f;
        f.left = bigram.first;
        f.right = bigram.second;
        f.tf = static_cast<double>(count) / static_cast<double>(total);
        f.tfidf = f.tf * idf.idf_of(bigram);
        features.push_back(std::move(f));
    }
    return features;  // map iteration keeps them sorted by (left, right)
}

TrainingModel build_network(const std::vector<TokenizedDoc>& train_docs, Source label) {
    const IdfTable idf = compute_idf(train_docs);

    struct Accum {
        double tfidf_sum = 0.0;
        int contributions = 0;
    };
    std::map<EdgeKey, Accum> accum;
    for (const auto& doc : train_docs) {
        for (const auto& feature : extract_bigrams(doc, idf)) {
            if (feature.left == feature.right) continue;  // no self-loops
            auto& a = accum[make_edge_key(feature.left, feature.right)];
            a.tfidf_sum += feature.tfidf;
            a.contributions += 1;
        }
    }
    if (accum.empty()) throw EmptyModel("no bigrams extracted from training documents");

    TrainingModel model;
    model.label = label;
    for (const auto& [edge, a] : accum) {
        model.nodes.insert(edge.first);
        model.nodes.insert(edge.second);
        model.edges[edge] = a.tfidf_sum / a.contributions;
    }
    return prune_lcc(model);
}

TrainingModel prune_lcc(const TrainingModel& model) {
    if (model.pruned) throw Error("prune_lcc: model already pruned");
    if (model.nodes.empty()) throw EmptyModel("prune_lcc: graph has no nodes");

    std::map<std::string, std::vector<const std::string*>> adjacency;
    for (const auto& node : model.nodes) adjacency[node];
    for (const auto& [edge, weight] : model.edges) {
        adjacency[edge.first].push_back(&edge.second);
        adjacency[edge.second].push_back(&edge.first);
    }

    // BFS per unvisited node, in sorted node order, so the first component of
    // maximal size is also the one holding the smallest label.
    std::set<std::string> best;
    std::set<std::string> visited;
    for (const auto& node : model.nodes) {
        if (visited.count(node)) continue;
        std::set<std::string> component;
        std::deque<std::string> queue{node};
        visited.insert(node);
        while (!queue.empty()) {
            std::string current = std::move(queue.front());
            queue.pop_front();
            component.insert(current);
            for (const std::string* next : adjacency[current])
                if (visited.insert(*next).second) queue.push_back(*next);
        }
        if (component.size() > best.size()) best = std::move(component);
    }

    TrainingModel pruned;
    pruned.label = model.label;
    pruned.pruned = true;
    pruned.pre_prune_node_count = static_cast<int>(model.nodes.size());
    pruned.pre_prune_edge_count = static_cast<int>(model.edges.size());
    pruned.nodes = best;
    for (const auto& [edge, weight] : model.edges)
        if (best.count(edge.first) && best.count(edge.second)) pruned.edges[edge] = weight;
    return pruned;
}

GraphStats graph_stats(const TrainingModel& model) {
    if (!model.pruned) throw Error("graph_stats: model not pruned");
    GraphStats stats;
    stats.node_count = static_cast<int>(model.nodes.size());
    stats.edge_count = static_cast<int>(model.edges.size());
    stats.node_edge_ratio =
        stats.edge_count > 0 ? static_cast<double>(stats.node_count) / stats.edge_count : 0.0;
    return stats;
}

std::string serialize_model(const TrainingModel& model) {
    nlohmann::ordered_json doc;
    doc["label"] = to_string(model.label);
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& node : model.nodes) doc["nodes"].push_back(node);
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& [edge, weight] : model.edges)
        doc["edges"].push_back(nlohmann::ordered_json::array({edge.first, edge.second, weight}));
    doc["pruned"] = model.pruned;
    return doc.dump(2) + "\n";
}

TrainingModel deserialize_model(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedJson(std::string("model: ") + e.what());
    }
    TrainingModel model;
    model.label = parse_source(doc.at("label").get<std::string>());
    for (const auto& node : doc.at("nodes")) model.nodes.insert(node.get<std::string>());
    for (const auto& edge : doc.at("edges")) {
        if (!edge.is_array() || edge.size() != 3) throw MalformedJson("model: bad edge entry");
        model.edges[make_edge_key(edge[0].get<std::string>(), edge[1].get<std::string>())] =
            edge[2].get<double>();
    }
    model.pruned = doc.at("pruned").get<bool>();
    return model;
}

void save_model(const TrainingModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file: " + path);
    out << serialize_model(model);
}

TrainingModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace xfakesci
