// Command-line front end: each experiment stage is a subcommand, every
// artifact is a file, and exit codes distinguish configuration (2), data (3),
// and external-service (4) failures.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xfakesci/genclient.hpp"
#include "xfakesci/pipeline.hpp"

namespace {

using namespace xfakesci;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<Period> parse_period_flag(const std::string& text) {
    if (text.empty()) return std::nullopt;
    try {
        return parse_period(text);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

Disease parse_disease_flag(const std::string& text) {
    try {
        return parse_disease(text);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

ReportFormat parse_format_flag(const std::string& text) {
    if (text == "json") return ReportFormat::JSON;
    if (text == "csv") return ReportFormat::CSV;
    if (text == "md") return ReportFormat::MARKDOWN_TABLE;
    throw ConfigError("unknown format: " + text + " (expected json, csv, or md)");
}

std::unique_ptr<HttpTransport> make_transport(const std::string& fixture_dir,
                                              std::chrono::milliseconds timeout) {
    if (!fixture_dir.empty()) return std::make_unique<FixtureTransport>(fixture_dir);
    return std::make_unique<LiveTransport>(timeout);
}

void write_text_file(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string corpus_to_json(const Corpus& corpus) {
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& doc : corpus.documents) {
        nlohmann::ordered_json record;
        record[corpus.source == Source::GPT ? "GPT-ID" : "PMID"] = doc.id;
        record["Title"] = doc.title;
        record["Abstract"] = doc.abstract_text;
        array.push_back(std::move(record));
    }
    return array.dump(2) + "\n";
}

// --- subcommand payloads ----------------------------------------------------

struct GenerateArgs {
    std::string disease = "alzheimers";
    int total = 20;
    int batch_size = 20;
    std::string out_dir;
    std::string base_url;
    std::string fixture_dir;
    int timeout_ms = 30000;
};

int run_generate(const GenerateArgs& args) {
    if (args.base_url.empty() && args.fixture_dir.empty())
        throw ConfigError("generate needs --base-url (or XFAKESCI_LLM_BASE_URL) "
                          "or --fixture-dir");
    EndpointConfig endpoint;
    endpoint.base_url = args.base_url;
    endpoint.timeout = std::chrono::milliseconds(args.timeout_ms);
    if (const char* key = std::getenv("XFAKESCI_API_KEY")) endpoint.api_key = key;

    const Disease disease = parse_disease_flag(args.disease);
    auto transport = make_transport(args.fixture_dir, endpoint.timeout);
    const std::string batch_dir = args.out_dir + "/batches_" + args.disease;
    const GenerationOutcome outcome =
        generate_corpus(disease, args.total, endpoint, *transport, batch_dir, args.batch_size);

    const std::string corpus_path = args.out_dir + "/gpt_" + args.disease + ".json";
    write_text_file(corpus_path, corpus_to_json(outcome.corpus));
    std::printf("wrote %zu articles to %s\n", outcome.corpus.documents.size(),
                corpus_path.c_str());
    if (outcome.partial()) {
        for (const auto& failure : outcome.manifest)
            std::fprintf(stderr, "batch %d failed: %s\n", failure.batch_index + 1,
                         failure.message.c_str());
        return 4;
    }
    return 0;
}

struct IngestArgs {
    std::string query;
    std::string period;
    std::string out_path;
    std::string base_url;
    std::string fixture_dir;
    int timeout_ms = 30000;
};

int run_ingest(const IngestArgs& args) {
    if (args.base_url.empty() && args.fixture_dir.empty())
        throw ConfigError("ingest needs --base-url (or XFAKESCI_PUBMED_BASE_URL) "
                          "or --fixture-dir");
    auto transport =
        make_transport(args.fixture_dir, std::chrono::milliseconds(args.timeout_ms));
    const auto records =
        fetch_remote(args.query, parse_period_flag(args.period), args.base_url, *transport);

    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    for (const auto& record : records) array.push_back(nlohmann::ordered_json(record));
    write_text_file(args.out_path, array.dump(2) + "\n");
    std::printf("wrote %zu records to %s\n", records.size(), args.out_path.c_str());
    return 0;
}

struct TrainArgs {
    std::string gpt_corpus;
    std::string pubmed_corpus;
    std::string disease = "alzheimers";
    std::string period;
    int train_size = 100;
    bool include_titles = false;
    std::string stopwords;
    std::string out_dir;
};

int run_train(const TrainArgs& args) {
    const Disease disease = parse_disease_flag(args.disease);
    const auto period = parse_period_flag(args.period);
    const StopwordSet stopwords =
        args.stopwords.empty() ? default_stopwords() : load_stopwords(args.stopwords);

    auto train_one = [&](const std::string& path, Source source) {
        const Corpus corpus = load_corpus(path, source, disease, period);
        if (static_cast<int>(corpus.documents.size()) < args.train_size)
            throw InsufficientDocuments("corpus " + path + " has fewer than " +
                                        std::to_string(args.train_size) + " documents");
        std::vector<Document> head(corpus.documents.begin(),
                                   corpus.documents.begin() + args.train_size);
        return build_network(preprocess_all(head, stopwords, args.include_titles), source);
    };

    const TrainingModel model_gpt = train_one(args.gpt_corpus, Source::GPT);
    const TrainingModel model_pub = train_one(args.pubmed_corpus, Source::PUBMED);

    std::filesystem::create_directories(args.out_dir);
    save_model(model_gpt, args.out_dir + "/model_gpt.json");
    save_model(model_pub, args.out_dir + "/model_pubmed.json");
    for (const auto* model : {&model_gpt, &model_pub}) {
        const GraphStats stats = graph_stats(*model);
        std::printf("%s: %d nodes, %d edges, node/edge ratio %.4f\n",
                    to_string(model->label).c_str(), stats.node_count, stats.edge_count,
                    stats.node_edge_ratio);
    }
    return 0;
}

struct CalibrateArgs {
    std::string gpt_corpus;
    std::string pubmed_corpus;
    std::string models_dir;
    std::string disease = "alzheimers";
    std::string period;
    int train_size = 100;
    int fold_size = 100;
    bool include_titles = false;
    std::string stopwords;
    std::string out_dir;
};

int run_calibrate(const CalibrateArgs& args) {
    const Disease disease = parse_disease_flag(args.disease);
    const auto period = parse_period_flag(args.period);
    const StopwordSet stopwords =
        args.stopwords.empty() ? default_stopwords() : load_stopwords(args.stopwords);
    const TrainingModel model_gpt = load_model(args.models_dir + "/model_gpt.json");
    const TrainingModel model_pub = load_model(args.models_dir + "/model_pubmed.json");

    auto means_for = [&](const std::string& path, Source source, const TrainingModel& model) {
        const Corpus corpus = load_corpus(path, source, disease, period);
        const SplitPlan plan = split_corpus(corpus, args.train_size, args.fold_size);
        std::vector<std::vector<TokenizedDoc>> folds;
        for (const auto& fold : plan.folds)
            folds.push_back(preprocess_all(fold, stopwords, args.include_titles));
        std::vector<double> values;
        for (const auto& m : fold_means(folds, model)) values.push_back(m.mean);
        return values;
    };

    CalibrationFile cal;
    cal.gpt_fold_means = means_for(args.gpt_corpus, Source::GPT, model_gpt);
    cal.pubmed_fold_means = means_for(args.pubmed_corpus, Source::PUBMED, model_pub);
    auto [gpt_range, pub_range] = compute_ranges(cal.gpt_fold_means, cal.pubmed_fold_means);
    cal.gpt = gpt_range;
    cal.pubmed = pub_range;

    std::filesystem::create_directories(args.out_dir);
    save_calibration(cal, args.out_dir + "/calibration.json");
    std::printf("GPT range [%.4f, %.4f], PubMed range [%.4f, %.4f]%s\n", cal.gpt.lower,
                cal.gpt.upper, cal.pubmed.lower, cal.pubmed.upper,
                cal.ranges_overlap() ? " (ranges overlap)" : "");
    return 0;
}

struct ClassifyArgs {
    std::string input;
    std::string models_dir;
    std::string calibration;
    std::string disease = "alzheimers";
    bool include_titles = false;
    std::string stopwords;
    std::string out_dir;
};

int run_classify(const ClassifyArgs& args) {
    const Disease disease = parse_disease_flag(args.disease);
    const StopwordSet stopwords =
        args.stopwords.empty() ? default_stopwords() : load_stopwords(args.stopwords);

    ClassifierConfig config;
    config.model_gpt = load_model(args.models_dir + "/model_gpt.json");
    config.model_pub = load_model(args.models_dir + "/model_pubmed.json");
    const CalibrationFile cal = load_calibration(args.calibration);
    config.range_gpt = cal.gpt;
    config.range_pub = cal.pubmed;
    if (cal.ranges_overlap())
        std::fprintf(stderr, "warning: calibration ranges overlap; "
                             "generated-source membership is checked first\n");

    // Source here is placeholder metadata: the input is exactly the unlabeled
    // material the classifier exists to label.
    const Corpus corpus = load_corpus(args.input, Source::PUBMED, disease);
    const auto docs = preprocess_all(corpus.documents, stopwords, args.include_titles);
    const BatchResult result = classify_batch(docs, config);

    std::filesystem::create_directories(args.out_dir);
    const std::string path = args.out_dir + "/predictions.jsonl";
    write_text_file(path, predictions_to_jsonl(result.predictions));

    int n_gpt = 0;
    for (const auto& p : result.predictions)
        if (p.label == Source::GPT) ++n_gpt;
    std::printf("%zu documents: %d labeled GPT, %zu labeled PUBMED -> %s\n", docs.size(), n_gpt,
                result.predictions.size() - n_gpt, path.c_str());
    for (const auto& err : result.errors)
        std::fprintf(stderr, "document \"%s\" skipped: %s\n", err.doc_id.c_str(),
                     err.message.c_str());
    return result.errors.empty() ? 0 : 3;
}

struct BenchmarkArgs {
    PipelineConfig config;
    std::string disease = "alzheimers";
    std::string period;
    std::string format = "csv";
};

int run_benchmark(BenchmarkArgs& args) {
    args.config.disease = parse_disease_flag(args.disease);
    args.config.period = parse_period_flag(args.period);
    const ReportFormat format = parse_format_flag(args.format);
    const PipelineResult result = run_pipeline(args.config);
    std::fputs(write_report(result.reports, format).c_str(), stdout);
    return 0;
}

struct PremiseArgs {
    std::string gpt_corpus;
    std::vector<std::string> pubmed_corpora;  // period=path
    std::string disease = "alzheimers";
    int train_size = 100;
    int fold_size = 100;
    bool include_titles = false;
    bool pre_prune = false;
    std::string stopwords;
    std::string out_dir;
};

int run_premise(const PremiseArgs& args) {
    PremiseInputs inputs;
    inputs.gpt_corpus_path = args.gpt_corpus;
    inputs.disease = parse_disease_flag(args.disease);
    inputs.train_size = args.train_size;
    inputs.fold_size = args.fold_size;
    inputs.include_titles = args.include_titles;
    inputs.pre_prune_counts = args.pre_prune;
    inputs.stopwords_path = args.stopwords;
    for (const auto& entry : args.pubmed_corpora) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--pubmed-corpus expects PERIOD=PATH, got: " + entry);
        const auto period = parse_period_flag(entry.substr(0, eq));
        if (!period) throw ConfigError("--pubmed-corpus expects PERIOD=PATH, got: " + entry);
        inputs.pubmed_corpora.emplace_back(*period, entry.substr(eq + 1));
    }
    const PremiseFiles files = premise_report(inputs, args.out_dir);
    std::printf("%s\n%s\n", files.phase1_csv.c_str(), files.phase2_csv.c_str());
    return 0;
}

struct ReportArgs {
    std::string input;
    std::string format = "md";
};

int run_report(const ReportArgs& args) {
    nlohmann::json rows;
    try {
        rows = nlohmann::json::parse(read_text_file(args.input));
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedJson(args.input + ": " + e.what());
    }
    if (!rows.is_array()) throw MalformedJson(args.input + ": expected an array of report rows");

    std::vector<EvalReport> reports;
    for (const auto& row : rows) {
        EvalReport report;
        report.classifier = row.at("classifier").get<std::string>();
        report.disease = parse_disease(row.at("disease").get<std::string>());
        if (row.contains("period") && row["period"].is_string())
            report.period = parse_period(row["period"].get<std::string>());
        report.implemented = row.value("implemented", true);
        if (report.implemented) {
            report.matrix.tp = row.at("tp").get<int>();
            report.matrix.fp = row.at("fp").get<int>();
            report.matrix.fn = row.at("fn").get<int>();
            report.matrix.tn = row.at("tn").get<int>();
            report.f1 = row.at("f1").get<double>();
        }
        reports.push_back(std::move(report));
    }
    std::fputs(write_report(reports, parse_format_flag(args.format)).c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xfakesci: bigram-network detection of machine-generated abstracts"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "Generate simulated abstracts in batches");
    cmd_gen->add_option("--disease", gen.disease, "alzheimers|cancer|depression");
    cmd_gen->add_option("--total", gen.total, "Articles to request")->check(CLI::PositiveNumber);
    cmd_gen->add_option("--batch-size", gen.batch_size)->check(CLI::PositiveNumber);
    cmd_gen->add_option("--out", gen.out_dir, "Output directory")->required();
    cmd_gen->add_option("--base-url", gen.base_url, "Chat-completion endpoint")
        ->envname("XFAKESCI_LLM_BASE_URL");
    cmd_gen->add_option("--fixture-dir", gen.fixture_dir, "Replay recorded responses");
    cmd_gen->add_option("--timeout-ms", gen.timeout_ms);

    IngestArgs ing;
    auto* cmd_ing = app.add_subcommand("ingest", "Fetch abstracts from the search endpoint");
    cmd_ing->add_option("--query", ing.query)->required();
    cmd_ing->add_option("--period", ing.period, "2010-2014|2015-2019|2020-2024");
    cmd_ing->add_option("--out", ing.out_path, "Output file")->required();
    cmd_ing->add_option("--base-url", ing.base_url, "Search endpoint")
        ->envname("XFAKESCI_PUBMED_BASE_URL");
    cmd_ing->add_option("--fixture-dir", ing.fixture_dir, "Replay recorded responses");
    cmd_ing->add_option("--timeout-ms", ing.timeout_ms);

    TrainArgs tr;
    auto* cmd_tr = app.add_subcommand("train", "Build both network training models");
    cmd_tr->add_option("--gpt-corpus", tr.gpt_corpus)->required();
    cmd_tr->add_option("--pubmed-corpus", tr.pubmed_corpus)->required();
    cmd_tr->add_option("--disease", tr.disease);
    cmd_tr->add_option("--period", tr.period);
    cmd_tr->add_option("--train-size", tr.train_size)->check(CLI::PositiveNumber);
    cmd_tr->add_flag("--include-titles", tr.include_titles);
    cmd_tr->add_option("--stopwords", tr.stopwords);
    cmd_tr->add_option("--out", tr.out_dir)->required();

    CalibrateArgs cal;
    auto* cmd_cal = app.add_subcommand("calibrate", "Compute fold means and ratio ranges");
    cmd_cal->add_option("--gpt-corpus", cal.gpt_corpus)->required();
    cmd_cal->add_option("--pubmed-corpus", cal.pubmed_corpus)->required();
    cmd_cal->add_option("--models", cal.models_dir, "Directory holding the trained models")
        ->required();
    cmd_cal->add_option("--disease", cal.disease);
    cmd_cal->add_option("--period", cal.period);
    cmd_cal->add_option("--train-size", cal.train_size)->check(CLI::PositiveNumber);
    cmd_cal->add_option("--fold-size", cal.fold_size)->check(CLI::PositiveNumber);
    cmd_cal->add_flag("--include-titles", cal.include_titles);
    cmd_cal->add_option("--stopwords", cal.stopwords);
    cmd_cal->add_option("--out", cal.out_dir)->required();

    ClassifyArgs cls;
    auto* cmd_cls = app.add_subcommand("classify", "Label unseen documents");
    cmd_cls->add_option("--input", cls.input, "Corpus of documents to label")->required();
    cmd_cls->add_option("--models", cls.models_dir)->required();
    cmd_cls->add_option("--calibration", cls.calibration)->required();
    cmd_cls->add_option("--disease", cls.disease);
    cmd_cls->add_flag("--include-titles", cls.include_titles);
    cmd_cls->add_option("--stopwords", cls.stopwords);
    cmd_cls->add_option("--out", cls.out_dir)->required();

    BenchmarkArgs bench;
    auto* cmd_bench = app.add_subcommand("benchmark", "Run the full pipeline and baselines");
    cmd_bench->add_option("--gpt-corpus", bench.config.gpt_corpus_path)->required();
    cmd_bench->add_option("--pubmed-corpus", bench.config.pubmed_corpus_path)->required();
    cmd_bench->add_option("--disease", bench.disease);
    cmd_bench->add_option("--period", bench.period);
    cmd_bench->add_option("--train-size", bench.config.train_size)->check(CLI::PositiveNumber);
    cmd_bench->add_option("--fold-size", bench.config.fold_size)->check(CLI::PositiveNumber);
    cmd_bench->add_option("--test-pubmed", bench.config.test_pubmed)
        ->check(CLI::NonNegativeNumber);
    cmd_bench->add_option("--test-gpt", bench.config.test_gpt)->check(CLI::NonNegativeNumber);
    cmd_bench->add_option("--out", bench.config.out_dir)->required();
    cmd_bench->add_option("--seed", bench.config.seed);
    cmd_bench->add_option("--learning-rate", bench.config.hyper.learning_rate);
    cmd_bench->add_option("--epochs", bench.config.hyper.epochs)->check(CLI::PositiveNumber);
    cmd_bench->add_option("--l2", bench.config.hyper.regularization);
    cmd_bench->add_option("--format", bench.format, "json|csv|md");
    cmd_bench->add_flag("--include-titles", bench.config.include_titles);
    cmd_bench->add_option("--stopwords", bench.config.stopwords_path);

    PremiseArgs prem;
    auto* cmd_prem = app.add_subcommand("premise", "Emit the premise phase tables");
    cmd_prem->add_option("--gpt-corpus", prem.gpt_corpus)->required();
    cmd_prem->add_option("--pubmed-corpus", prem.pubmed_corpora,
                         "PERIOD=PATH, repeatable")->required();
    cmd_prem->add_option("--disease", prem.disease);
    cmd_prem->add_option("--train-size", prem.train_size)->check(CLI::PositiveNumber);
    cmd_prem->add_option("--fold-size", prem.fold_size)->check(CLI::PositiveNumber);
    cmd_prem->add_flag("--include-titles", prem.include_titles);
    cmd_prem->add_flag("--pre-prune", prem.pre_prune, "Report counts before LCC pruning");
    cmd_prem->add_option("--stopwords", prem.stopwords);
    cmd_prem->add_option("--out", prem.out_dir)->required();

    ReportArgs rep;
    auto* cmd_rep = app.add_subcommand("report", "Re-render a JSON report");
    cmd_rep->add_option("--input", rep.input, "report.json from a benchmark run")->required();
    cmd_rep->add_option("--format", rep.format, "json|csv|md");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_gen->parsed()) return run_generate(gen);
        if (cmd_ing->parsed()) return run_ingest(ing);
        if (cmd_tr->parsed()) return run_train(tr);
        if (cmd_cal->parsed()) return run_calibrate(cal);
        if (cmd_cls->parsed()) return run_classify(cls);
        if (cmd_bench->parsed()) return run_benchmark(bench);
        if (cmd_prem->parsed()) return run_premise(prem);
        if (cmd_rep->parsed()) return run_report(rep);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const PipelineError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.external ? 4 : 3;
    } catch (const TransportError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
