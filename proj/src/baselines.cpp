#include "xfakesci/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

namespace xfakesci {

std::string to_string(BaselineKind k) {
    switch (k) {
        case BaselineKind::NAIVE_BAYES: return "naive_bayes";
        case BaselineKind::LOGREG: return "logreg";
        case BaselineKind::LINEAR_SVM: return "linear_svm";
    }
    return "naive_bayes";
}

int Vocabulary::add(const std::string& token) {
    auto [it, inserted] = ids.emplace(token, size());
    if (inserted) tokens.push_back(token);
    return it->second;
}

std::optional<int> Vocabulary::lookup(const std::string& token) const {
    auto it = ids.find(token);
    if (it == ids.end()) return std::nullopt;
    return it->second;
}

std::pair<std::vector<BowVector>, Vocabulary> vectorize(
    const std::vector<TokenizedDoc>& docs, const std::optional<Vocabulary>& vocabulary) {
    Vocabulary vocab = vocabulary.value_or(Vocabulary{});
    const bool fitting = !vocabulary.has_value();

    std::vector<std::map<int, double>> counts(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& sentence : docs[d].sentences) {
            for (const auto& token : sentence) {
                int id;
                if (fitting) {
                    id = vocab.add(token);
                } else {
                    auto found = vocab.lookup(token);
                    if (!found) continue;
                    id = *found;
                }
                counts[d][id] += 1.0;
            }
        }
    }
    if (vocab.size() == 0) throw EmptyVocabulary("vectorize: no tokens to build a vocabulary from");

    std::vector<BowVector> vectors(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        vectors[d].n_features = vocab.size();
        vectors[d].indices.reserve(counts[d].size());
        vectors[d].values.reserve(counts[d].size());
        for (const auto& [id, count] : counts[d]) {
            vectors[d].indices.push_back(id);
            vectors[d].values.push_back(count);
        }
    }
    return {std::move(vectors), std::move(vocab)};
}

namespace {

double dot(const std::vector<double>& w, const BowVector& x) {
    double z = 0.0;
    for (std::size_t i = 0; i < x.indices.size(); ++i) z += w[x.indices[i]] * x.values[i];
    return z;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_alignment(const std::vector<BowVector>& vectors, const std::vector<Source>& labels) {
    if (vectors.empty() || vectors.size() != labels.size())
        throw Error("train_baseline: vectors and labels must be non-empty and aligned");
    bool has_pub = false, has_gpt = false;
    for (Source s : labels) (s == Source::PUBMED ? has_pub : has_gpt) = true;
    if (!has_pub || !has_gpt)
        throw SingleClassTraining("train_baseline: need at least one example per class");
}

int feature_count(const std::vector<BowVector>& vectors) {
    int n = 0;
    for (const auto& v : vectors) n = std::max(n, v.n_features);
    return n;
}

BaselineModel train_naive_bayes(const std::vector<BowVector>& vectors,
                                const std::vector<Source>& labels, int n_features) {
    BaselineModel model;
    model.kind = BaselineKind::NAIVE_BAYES;
    model.log_prior.assign(2, 0.0);
    model.log_likelihood.assign(2, std::vector<double>(n_features, 0.0));

    std::array<double, 2> class_docs{0.0, 0.0};
    std::array<double, 2> class_tokens{0.0, 0.0};
    std::array<std::vector<double>, 2> token_counts;
    token_counts[0].assign(n_features, 0.0);
    token_counts[1].assign(n_features, 0.0);

    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const int c = labels[i] == Source::PUBMED ? 0 : 1;
        class_docs[c] += 1.0;
        for (std::size_t j = 0; j < vectors[i].indices.size(); ++j) {
            token_counts[c][vectors[i].indices[j]] += vectors[i].values[j];
            class_tokens[c] += vectors[i].values[j];
        }
    }
    for (int c = 0; c < 2; ++c) {
        model.log_prior[c] = std::log(class_docs[c] / static_cast<double>(vectors.size()));
        const double denom = class_tokens[c] + n_features;  // Laplace, alpha = 1
        for (int t = 0; t < n_features; ++t)
            model.log_likelihood[c][t] = std::log((token_counts[c][t] + 1.0) / denom);
    }
    return model;
}

BaselineModel train_logreg(const std::vector<BowVector>& vectors,
                           const std::vector<Source>& labels, int n_features,
                           const BaselineHyper& hyper) {
    BaselineModel model;
    model.kind = BaselineKind::LOGREG;
    model.weights.assign(n_features, 0.0);
    model.bias = 0.0;

    std::vector<double> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == Source::PUBMED ? 1.0 : 0.0;

    std::vector<double> grad_w(n_features, 0.0);
    double grad_b = 0.0;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        logreg_gradient(model.weights, model.bias, vectors, y, hyper.regularization, grad_w,
                        grad_b);
        for (int t = 0; t < n_features; ++t) model.weights[t] -= hyper.learning_rate * grad_w[t];
        model.bias -= hyper.learning_rate * grad_b;

        const double loss =
            logreg_loss(model.weights, model.bias, vectors, y, hyper.regularization);
        if (!std::isfinite(loss))
            throw NonFiniteLoss("logreg: loss diverged at epoch " + std::to_string(epoch));
    }
    return model;
}

BaselineModel train_linear_svm(const std::vector<BowVector>& vectors,
                               const std::vector<Source>& labels, int n_features,
                               const BaselineHyper& hyper) {
    BaselineModel model;
    model.kind = BaselineKind::LINEAR_SVM;
    model.weights.assign(n_features, 0.0);
    model.bias = 0.0;

    std::vector<double> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == Source::PUBMED ? 1.0 : -1.0;

    std::vector<std::size_t> order(vectors.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(hyper.seed);

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            const double margin = y[i] * (dot(model.weights, vectors[i]) + model.bias);
            const double shrink = 1.0 - hyper.learning_rate * hyper.regularization;
            for (double& w : model.weights) w *= shrink;
            if (margin < 1.0) {
                for (std::size_t j = 0; j < vectors[i].indices.size(); ++j)
                    model.weights[vectors[i].indices[j]] +=
                        hyper.learning_rate * y[i] * vectors[i].values[j];
                model.bias += hyper.learning_rate * y[i];
            }
        }
        for (double w : model.weights)
            if (!std::isfinite(w))
                throw NonFiniteLoss("linear_svm: weights diverged at epoch " +
                                    std::to_string(epoch));
    }
    return model;
}

}  // namespace

BaselineModel train_baseline(BaselineKind kind, const std::vector<BowVector>& vectors,
                             const std::vector<Source>& labels, const BaselineHyper& hyper) {
    check_alignment(vectors, labels);
    const int n_features = feature_count(vectors);
    if (n_features == 0) throw EmptyVocabulary("train_baseline: zero-width feature space");

    switch (kind) {
        case BaselineKind::NAIVE_BAYES: return train_naive_bayes(vectors, labels, n_features);
        case BaselineKind::LOGREG: return train_logreg(vectors, labels, n_features, hyper);
        case BaselineKind::LINEAR_SVM: return train_linear_svm(vectors, labels, n_features, hyper);
    }
    throw Error("train_baseline: unknown kind");
}

std::vector<Source> predict_baseline(const BaselineModel& model,
                                     const std::vector<BowVector>& vectors) {
    const int n_features = model.kind == BaselineKind::NAIVE_BAYES
                               ? static_cast<int>(model.log_likelihood.at(0).size())
                               : static_cast<int>(model.weights.size());
    std::vector<Source> out;
    out.reserve(vectors.size());
    for (const auto& v : vectors) {
        if (!v.indices.empty() && v.indices.back() >= n_features)
            throw DimensionMismatch("predict_baseline: vector index " +
                                    std::to_string(v.indices.back()) + " outside model space of " +
                                    std::to_string(n_features));
        double score;  // >= 0 means PUBMED
        if (model.kind == BaselineKind::NAIVE_BAYES) {
            double s0 = model.log_prior[0], s1 = model.log_prior[1];
            for (std::size_t j = 0; j < v.indices.size(); ++j) {
                s0 += v.values[j] * model.log_likelihood[0][v.indices[j]];
                s1 += v.values[j] * model.log_likelihood[1][v.indices[j]];
            }
            score = s0 - s1;
        } else {
            score = dot(model.weights, v) + model.bias;
        }
        out.push_back(score >= 0.0 ? Source::PUBMED : Source::GPT);
    }
    return out;
}

double logreg_loss(const std::vector<double>& weights, double bias,
                   const std::vector<BowVector>& vectors, const std::vector<double>& y,
                   double regularization) {
    double loss = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const double z = dot(weights, vectors[i]) + bias;
        // max(z,0) - z*y + log(1 + exp(-|z|)) is the stable form of the
        // per-example cross-entropy.
        loss += std::max(z, 0.0) - z * y[i] + std::log1p(std::exp(-std::abs(z)));
    }
    loss /= static_cast<double>(vectors.size());
    double ssq = 0.0;
    for (double w : weights) ssq += w * w;
    return loss + 0.5 * regularization * ssq;
}

void logreg_gradient(const std::vector<double>& weights, double bias,
                     const std::vector<BowVector>& vectors, const std::vector<double>& y,
                     double regularization, std::vector<double>& grad_w, double& grad_b) {
    grad_w.assign(weights.size(), 0.0);
    grad_b = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const double residual = sigmoid(dot(weights, vectors[i]) + bias) - y[i];
        for (std::size_t j = 0; j < vectors[i].indices.size(); ++j)
            grad_w[vectors[i].indices[j]] += residual * vectors[i].values[j];
        grad_b += residual;
    }
    const double inv_n = 1.0 / static_cast<double>(vectors.size());
    for (std::size_t t = 0; t < weights.size(); ++t)
        grad_w[t] = grad_w[t] * inv_n + regularization * weights[t];
    grad_b *= inv_n;
}

std::string serialize_baseline(const BaselineModel& model) {
    nlohmann::ordered_json doc;
    doc["kind"] = to_string(model.kind);
    doc["vocabulary"] = model.vocabulary.tokens;
    if (model.kind == BaselineKind::NAIVE_BAYES) {
        doc["log_prior"] = model.log_prior;
        doc["log_likelihood"] = model.log_likelihood;
    } else {
        doc["weights"] = model.weights;
        doc["bias"] = model.bias;
    }
    return doc.dump(2) + "\n";
}

BaselineModel deserialize_baseline(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedJson(std::string("baseline model: ") + e.what());
    }
    BaselineModel model;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "naive_bayes")
        model.kind = BaselineKind::NAIVE_BAYES;
    else if (kind == "logreg")
        model.kind = BaselineKind::LOGREG;
    else if (kind == "linear_svm")
        model.kind = BaselineKind::LINEAR_SVM;
    else
        throw MalformedJson("baseline model: unknown kind \"" + kind + "\"");

    for (const auto& token : doc.at("vocabulary")) model.vocabulary.add(token.get<std::string>());
    if (model.kind == BaselineKind::NAIVE_BAYES) {
        model.log_prior = doc.at("log_prior").get<std::vector<double>>();
        model.log_likelihood = doc.at("log_likelihood").get<std::vector<std::vector<double>>>();
    } else {
        model.weights = doc.at("weights").get<std::vector<double>>();
        model.bias = doc.at("bias").get<double>();
    }
    return model;
}

void save_baseline(const BaselineModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write baseline model: " + path);
    out << serialize_baseline(model);
}

BaselineModel load_baseline(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open baseline model: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_baseline(buf.str());
}

}  // namespace xfakesci
