#include "xfakesci/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace xfakesci {

namespace {

// Runs one stage, renaming generic failures with the stage so callers see
// where the pipeline broke. InsufficientDocuments keeps its type: callers
// branch on it to suggest a smaller split plan.
template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const InsufficientDocuments& e) {
        throw InsufficientDocuments(name + ": " + e.what());
    } catch (const TransportError& e) {
        throw PipelineError(name, e.what(), /*external=*/true);
    } catch (const PipelineError&) {
        throw;
    } catch (const Error& e) {
        throw PipelineError(name, e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

std::vector<std::vector<TokenizedDoc>> preprocess_folds(
    const std::vector<std::vector<Document>>& folds, const StopwordSet& stopwords,
    bool include_titles) {
    std::vector<std::vector<TokenizedDoc>> out;
    out.reserve(folds.size());
    for (const auto& fold : folds) out.push_back(preprocess_all(fold, stopwords, include_titles));
    return out;
}

std::vector<double> mean_values(const std::vector<FoldMean>& means) {
    std::vector<double> values;
    values.reserve(means.size());
    for (const auto& m : means) values.push_back(m.mean);
    return values;
}

std::string fixed(double value, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult result;

    const Corpus gpt_corpus = stage("load", [&] {
        return load_corpus(config.gpt_corpus_path, Source::GPT, config.disease);
    });
    const Corpus pub_corpus = stage("load", [&] {
        return load_corpus(config.pubmed_corpus_path, Source::PUBMED, config.disease,
                           config.period);
    });

    const StopwordSet stopwords = stage("stopwords", [&] {
        return config.stopwords_path.empty() ? default_stopwords()
                                             : load_stopwords(config.stopwords_path);
    });

    const SplitPlan gpt_split = stage("split", [&] {
        return split_corpus(gpt_corpus, config.train_size, config.fold_size);
    });
    const SplitPlan pub_split = stage("split", [&] {
        return split_corpus(pub_corpus, config.train_size, config.fold_size);
    });
    stage("split", [&] {
        if (static_cast<int>(gpt_split.test.size()) < config.test_gpt ||
            static_cast<int>(pub_split.test.size()) < config.test_pubmed)
            throw InsufficientDocuments(
                "test pool smaller than the requested composition of " +
                std::to_string(config.test_pubmed) + " + " + std::to_string(config.test_gpt));
        return 0;
    });

    const bool titles = config.include_titles;
    const auto gpt_train = stage("preprocess", [&] {
        return preprocess_all(gpt_split.train, stopwords, titles);
    });
    const auto pub_train = stage("preprocess", [&] {
        return preprocess_all(pub_split.train, stopwords, titles);
    });
    const auto gpt_folds = stage("preprocess", [&] {
        return preprocess_folds(gpt_split.folds, stopwords, titles);
    });
    const auto pub_folds = stage("preprocess", [&] {
        return preprocess_folds(pub_split.folds, stopwords, titles);
    });

    // Test order mirrors the benchmark protocol: real abstracts first, then
    // the generated ones.
    std::vector<TokenizedDoc> test_docs;
    std::vector<Source> gold;
    stage("preprocess", [&] {
        for (int i = 0; i < config.test_pubmed; ++i) {
            test_docs.push_back(preprocess(pub_split.test[i], stopwords, titles));
            gold.push_back(Source::PUBMED);
        }
        for (int i = 0; i < config.test_gpt; ++i) {
            test_docs.push_back(preprocess(gpt_split.test[i], stopwords, titles));
            gold.push_back(Source::GPT);
        }
        return 0;
    });

    const TrainingModel model_gpt =
        stage("train", [&] { return build_network(gpt_train, Source::GPT); });
    const TrainingModel model_pub =
        stage("train", [&] { return build_network(pub_train, Source::PUBMED); });

    stage("calibrate", [&] {
        result.calibration.gpt_fold_means = mean_values(fold_means(gpt_folds, model_gpt));
        result.calibration.pubmed_fold_means = mean_values(fold_means(pub_folds, model_pub));
        auto [gpt_range, pub_range] =
            compute_ranges(result.calibration.gpt_fold_means, result.calibration.pubmed_fold_means);
        result.calibration.gpt = gpt_range;
        result.calibration.pubmed = pub_range;
        return 0;
    });

    const ClassifierConfig classifier_config{model_gpt, model_pub, result.calibration.gpt,
                                             result.calibration.pubmed};
    const BatchResult batch =
        stage("classify", [&] { return classify_batch(test_docs, classifier_config); });
    if (!batch.errors.empty())
        throw PipelineError("classify", "document \"" + batch.errors.front().doc_id +
                                            "\": " + batch.errors.front().message);

    std::vector<std::pair<Source, Source>> network_scored;
    for (std::size_t i = 0; i < batch.predictions.size(); ++i)
        network_scored.emplace_back(gold[i], batch.predictions[i].label);

    // Baselines train on the same 100+100 split the network models used.
    BaselineHyper hyper = config.hyper;
    hyper.seed = config.seed;
    std::vector<TokenizedDoc> baseline_train;
    std::vector<Source> baseline_labels;
    for (const auto& d : pub_train) {
        baseline_train.push_back(d);
        baseline_labels.push_back(Source::PUBMED);
    }
    for (const auto& d : gpt_train) {
        baseline_train.push_back(d);
        baseline_labels.push_back(Source::GPT);
    }

    std::vector<BaselineModel> baseline_models;
    std::vector<std::vector<std::pair<Source, Source>>> baseline_scored;
    stage("benchmark", [&] {
        auto [train_vectors, vocabulary] = vectorize(baseline_train);
        auto [test_vectors, unused] = vectorize(test_docs, vocabulary);
        for (BaselineKind kind :
             {BaselineKind::NAIVE_BAYES, BaselineKind::LOGREG, BaselineKind::LINEAR_SVM}) {
            BaselineModel model = train_baseline(kind, train_vectors, baseline_labels, hyper);
            model.vocabulary = vocabulary;
            const auto predicted = predict_baseline(model, test_vectors);
            std::vector<std::pair<Source, Source>> scored;
            for (std::size_t i = 0; i < predicted.size(); ++i)
                scored.emplace_back(gold[i], predicted[i]);
            baseline_models.push_back(std::move(model));
            baseline_scored.push_back(std::move(scored));
        }
        return 0;
    });

    stage("report", [&] {
        auto report_for = [&](const std::string& name,
                              const std::vector<std::pair<Source, Source>>& scored) {
            EvalReport report;
            report.classifier = name;
            report.disease = config.disease;
            report.period = config.period;
            report.matrix = confusion(scored);
            report.f1 = f1(report.matrix);
            return report;
        };
        result.reports.push_back(report_for("xfakesci", network_scored));
        for (std::size_t i = 0; i < baseline_models.size(); ++i)
            result.reports.push_back(
                report_for(to_string(baseline_models[i].kind), baseline_scored[i]));

        EvalReport svm_row;  // kernel SVM benchmark slot, intentionally empty
        svm_row.classifier = "classical_svm";
        svm_row.disease = config.disease;
        svm_row.period = config.period;
        svm_row.implemented = false;
        result.reports.push_back(svm_row);
        return 0;
    });

    if (!config.out_dir.empty()) {
        stage("write", [&] {
            std::filesystem::create_directories(config.out_dir);
            auto emit = [&](const std::string& name, const std::string& text) {
                const std::string path = config.out_dir + "/" + name;
                write_text(path, text);
                result.artifact_paths.push_back(path);
            };
            emit("model_gpt.json", serialize_model(model_gpt));
            emit("model_pubmed.json", serialize_model(model_pub));
            emit("calibration.json", serialize_calibration(result.calibration));
            emit("predictions.jsonl", predictions_to_jsonl(batch.predictions));
            for (const auto& model : baseline_models)
                emit("baseline_" + to_string(model.kind) + ".json", serialize_baseline(model));
            emit("report.csv", write_report(result.reports, ReportFormat::CSV));
            emit("report.json", write_report(result.reports, ReportFormat::JSON));
            return 0;
        });
    }
    return result;
}

PremiseFiles premise_report(const PremiseInputs& inputs, const std::string& out_dir) {
    const StopwordSet stopwords = stage("stopwords", [&] {
        return inputs.stopwords_path.empty() ? default_stopwords()
                                             : load_stopwords(inputs.stopwords_path);
    });

    struct SourceRow {
        std::string source;
        std::string period;
        GraphStats stats;
        std::vector<FoldMean> means;
    };
    std::vector<SourceRow> rows;

    auto analyze = [&](const std::string& source_name, const std::string& period_name,
                       const Corpus& corpus, Source label) {
        const SplitPlan split = stage("split", [&] {
            return split_corpus(corpus, inputs.train_size, inputs.fold_size);
        });
        const auto train = stage("preprocess", [&] {
            return preprocess_all(split.train, stopwords, inputs.include_titles);
        });
        const auto folds = stage("preprocess", [&] {
            return preprocess_folds(split.folds, stopwords, inputs.include_titles);
        });
        const TrainingModel model = stage("train", [&] { return build_network(train, label); });

        SourceRow row;
        row.source = source_name;
        row.period = period_name;
        if (inputs.pre_prune_counts) {
            row.stats.node_count = model.pre_prune_node_count;
            row.stats.edge_count = model.pre_prune_edge_count;
            row.stats.node_edge_ratio =
                model.pre_prune_edge_count > 0
                    ? static_cast<double>(model.pre_prune_node_count) / model.pre_prune_edge_count
                    : 0.0;
        } else {
            row.stats = graph_stats(model);
        }
        row.means = stage("calibrate", [&] { return fold_means(folds, model); });
        rows.push_back(std::move(row));
    };

    const Corpus gpt_corpus = stage("load", [&] {
        return load_corpus(inputs.gpt_corpus_path, Source::GPT, inputs.disease);
    });
    analyze("GPT", "", gpt_corpus, Source::GPT);
    for (const auto& [period, path] : inputs.pubmed_corpora) {
        const Corpus corpus = stage("load", [&] {
            return load_corpus(path, Source::PUBMED, inputs.disease, period);
        });
        analyze("PUBMED", to_string(period), corpus, Source::PUBMED);
    }

    std::string phase1 = "source,period,nodes,edges,node_to_edge_ratio\n";
    std::string phase2 = "source,period,fold_index,mean_ratio\n";
    for (const auto& row : rows) {
        phase1 += row.source + "," + row.period + "," + std::to_string(row.stats.node_count) +
                  "," + std::to_string(row.stats.edge_count) + "," +
                  fixed(row.stats.node_edge_ratio, 4) + "\n";
        for (const auto& m : row.means)
            phase2 += row.source + "," + row.period + "," + std::to_string(m.fold_index) + "," +
                      fixed(m.mean, 2) + "\n";
    }

    stage("write", [&] {
        std::filesystem::create_directories(out_dir);
        return 0;
    });
    PremiseFiles files{out_dir + "/premise_phase1.csv", out_dir + "/premise_phase2.csv"};
    stage("write", [&] {
        write_text(files.phase1_csv, phase1);
        write_text(files.phase2_csv, phase2);
        return 0;
    });
    return files;
}

}  // namespace xfakesci
