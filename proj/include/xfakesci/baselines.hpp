#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xfakesci/corpus.hpp"

namespace xfakesci {

enum class BaselineKind { NAIVE_BAYES, LOGREG, LINEAR_SVM };

std::string to_string(BaselineKind k);

// Sparse bag-of-words vector; indices strictly increasing.
struct BowVector {
    std::vector<int> indices;
    std::vector<double> values;
    int n_features = 0;
};

// Token ids assigned by first occurrence over the training documents.
struct Vocabulary {
    std::vector<std::string> tokens;  // id -> token
    std::unordered_map<std::string, int> ids;

    int size() const { return static_cast<int>(tokens.size()); }
    int add(const std::string& token);            // existing id or a new one
    std::optional<int> lookup(const std::string& token) const;
};

struct BaselineHyper {
    double learning_rate = 0.1;
    int epochs = 200;
    double regularization = 1e-4;
    std::uint32_t seed = 42;
};

struct BaselineModel {
    BaselineKind kind = BaselineKind::NAIVE_BAYES;
    Vocabulary vocabulary;

    // NAIVE_BAYES: Laplace-smoothed log estimates, class index 0 = PUBMED.
    std::vector<double> log_prior;
    std::vector<std::vector<double>> log_likelihood;

    // LOGREG / LINEAR_SVM: w.x + b >= 0 predicts PUBMED.
    std::vector<double> weights;
    double bias = 0.0;
};

// Training call (no vocabulary) builds the vocabulary from the docs; test
// call reuses it and drops out-of-vocabulary tokens.
std::pair<std::vector<BowVector>, Vocabulary> vectorize(
    const std::vector<TokenizedDoc>& docs,
    const std::optional<Vocabulary>& vocabulary = std::nullopt);

BaselineModel train_baseline(BaselineKind kind, const std::vector<BowVector>& vectors,
                             const std::vector<Source>& labels,
                             const BaselineHyper& hyper = {});

std::vector<Source> predict_baseline(const BaselineModel& model,
                                     const std::vector<BowVector>& vectors);

// Regularized mean log-loss and its gradient, exposed so the gradient can be
// checked against finite differences.
double logreg_loss(const std::vector<double>& weights, double bias,
                   const std::vector<BowVector>& vectors, const std::vector<double>& y,
                   double regularization);
void logreg_gradient(const std::vector<double>& weights, double bias,
                     const std::vector<BowVector>& vectors, const std::vector<double>& y,
                     double regularization, std::vector<double>& grad_w, double& grad_b);

std::string serialize_baseline(const BaselineModel& model);
BaselineModel deserialize_baseline(const std::string& json_text);
void save_baseline(const BaselineModel& model, const std::string& path);
BaselineModel load_baseline(const std::string& path);

}  // namespace xfakesci
