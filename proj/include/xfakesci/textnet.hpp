#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xfakesci/corpus.hpp"

namespace xfakesci {

// An ordered pair of adjacent tokens within one sentence.
using Bigram = std::pair<std::string, std::string>;

// Unordered node pair, canonicalized so (s,t) and (t,s) are the same edge.
using EdgeKey = std::pair<std::string, std::string>;
EdgeKey make_edge_key(const std::string& s, const std::string& t);

struct IdfEntry {
    int df = 0;
    double idf = 0.0;
};

// idf = ln(N / (1 + df)), df counting documents that contain the bigram at
// least once. Bigrams never seen at fit time get ln(N / 1).
struct IdfTable {
    std::map<Bigram, IdfEntry> entries;
    int n_docs = 0;

    double idf_of(const Bigram& bigram) const;
};

struct BigramFeature {
    std::string left;
    std::string right;
    double tf = 0.0;     // occurrences / total tokens in the document
    double tfidf = 0.0;  // tf * idf
};

// Undirected unigram-node / bigram-edge graph for one source. Edge weight is
// the mean tfidf over the document features that contributed the edge.
struct TrainingModel {
    Source label = Source::PUBMED;
    std::set<std::string> nodes;
    std::map<EdgeKey, double> edges;
    bool pruned = false;

    // Counts before LCC pruning; kept in memory only, not serialized.
    int pre_prune_node_count = 0;
    int pre_prune_edge_count = 0;

    bool has_edge(const std::string& s, const std::string& t) const {
        return edges.count(make_edge_key(s, t)) > 0;
    }
};

struct GraphStats {
    int node_count = 0;
    int edge_count = 0;
    double node_edge_ratio = 0.0;
};

IdfTable compute_idf(const std::vector<TokenizedDoc>& docs);

// One feature per distinct in-sentence bigram, sorted by (left, right).
// Bigrams never cross sentence boundaries.
std::vector<BigramFeature> extract_bigrams(const TokenizedDoc& doc, const IdfTable& idf);

// The distinct ordered bigrams of a document; the membership probe used by
// contribution ratios.
std::set<Bigram> distinct_bigrams(const TokenizedDoc& doc);

// Fit idf on `train_docs`, add one undirected edge per observed bigram, then
// prune to the largest connected component.
TrainingModel build_network(const std::vector<TokenizedDoc>& train_docs, Source label);

// Keeps the component with the most nodes; ties go to the component holding
// the lexicographically smallest node label.
TrainingModel prune_lcc(const TrainingModel& model);

GraphStats graph_stats(const TrainingModel& model);

// Canonical JSON bytes: {label, nodes sorted, edges sorted as [left, right,
// weight], pruned}. Identical models serialize identically.
std::string serialize_model(const TrainingModel& model);
TrainingModel deserialize_model(const std::string& json_text);
void save_model(const TrainingModel& model, const std::string& path);
TrainingModel load_model(const std::string& path);

}  // namespace xfakesci
