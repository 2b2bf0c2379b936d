#include <cstdint>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tgcn/baseline.hpp"
#include "tgcn/checkpoint.hpp"
#include "tgcn/config.hpp"
#include "tgcn/graph.hpp"
#include "tgcn/metrics.hpp"
#include "tgcn/pipeline.hpp"
#include "tgcn/synth.hpp"
#include "tgcn/util.hpp"

namespace {

using namespace tgcn;

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool deterministic = false;
};

PipelineConfig load_config(const GlobalOpts& g) {
    PipelineConfig cfg;
    if (!g.config_path.empty()) cfg = parse_config(read_file(g.config_path));
    if (g.seed) cfg.set_seed(*g.seed);
    if (g.deterministic) cfg.deterministic = true;
    cfg.validate();
    return cfg;
}

Cohort load_cohort(const std::string& schema_path, const std::string& triplets_path,
                   const std::string& labels_path) {
    FeatureSchema schema = parse_schema(read_file(schema_path));
    std::ifstream tin(triplets_path);
    if (!tin) throw DataError("cannot open " + triplets_path);

    // Count patients from the labels file when present; otherwise infer
    // max patient id + 1 from the triplets themselves.
    if (!labels_path.empty()) {
        std::ifstream lin(labels_path);
        if (!lin) throw DataError("cannot open " + labels_path);
        std::string header, line;
        std::getline(lin, header);
        int n = 0;
        while (std::getline(lin, line))
            if (!line.empty()) ++n;
        lin.clear();
        lin.seekg(0);

        TripletParseResult parsed = parse_triplets(tin, schema, n);
        for (std::size_t i = 0; i < parsed.issues.size() && i < 10; ++i)
            std::cerr << "warning: " << triplets_path << " line " << parsed.issues[i].line << ": "
                      << parsed.issues[i].message << "\n";
        if (!parsed.issues.empty())
            throw DataError(triplets_path + ": " + std::to_string(parsed.issues.size()) +
                            " invalid records");
        parsed.cohort.labels = parse_labels(lin, n);
        return parsed.cohort;
    }

    std::stringstream buf;
    buf << tin.rdbuf();
    std::string text = buf.str();
    int n = 0;
    {
        std::istringstream scan(text);
        std::string header, line;
        std::getline(scan, header);
        while (std::getline(scan, line)) {
            if (line.empty()) continue;
            std::size_t comma = line.find(',');
            if (comma == std::string::npos) continue;
            try {
                n = std::max(n, std::stoi(line.substr(0, comma)) + 1);
            } catch (const std::exception&) {
                // parse_triplets reports the malformed record properly below
            }
        }
    }
    std::istringstream tin2(text);
    TripletParseResult parsed = parse_triplets(tin2, schema, n);
    for (std::size_t i = 0; i < parsed.issues.size() && i < 10; ++i)
        std::cerr << "warning: " << triplets_path << " line " << parsed.issues[i].line << ": "
                  << parsed.issues[i].message << "\n";
    if (!parsed.issues.empty())
        throw DataError(triplets_path + ": " + std::to_string(parsed.issues.size()) +
                        " invalid records");
    return parsed.cohort;
}

void check_fingerprint(const Checkpoint& ckpt, const FeatureSchema& schema) {
    std::string fp = schema_fingerprint(schema);
    if (fp != ckpt.schema_fingerprint)
        throw DataError("checkpoint schema fingerprint " + ckpt.schema_fingerprint +
                        " does not match cohort schema " + fp);
}

int cmd_synth(const GlobalOpts& g, const std::string& out_dir) {
    PipelineConfig cfg = load_config(g);
    SynthResult res = generate_full(cfg.synth);
    write_file(out_dir + "/schema.json", write_schema_json(res.cohort.schema));
    write_file(out_dir + "/triplets.csv", write_triplets_csv(res.cohort));
    write_file(out_dir + "/labels.csv", write_labels_csv(*res.cohort.labels));
    write_file(out_dir + "/provenance.json", provenance_json(cfg.synth, res));
    std::cout << "wrote " << res.cohort.n_patients << " patients, "
              << res.cohort.triplets.size() << " triplets to " << out_dir << "\n";
    std::cout << "realized prevalence " << format_fixed(res.realized_prevalence, 4) << "\n";
    return 0;
}

int cmd_train(const GlobalOpts& g, const std::string& schema_path,
              const std::string& triplets_path, const std::string& labels_path,
              const std::string& out_ckpt, std::string history_path) {
    PipelineConfig cfg = load_config(g);
    Cohort cohort = load_cohort(schema_path, triplets_path, labels_path);
    ExperimentResult res = run_experiment(cohort, cfg);

    Checkpoint ckpt;
    ckpt.created_at = cfg.deterministic ? 0 : static_cast<std::int64_t>(std::time(nullptr));
    ckpt.schema_fingerprint = schema_fingerprint(cohort.schema);
    ckpt.stats = res.trained.stats;
    ckpt.config = cfg.train;
    ckpt.params = res.trained.params;
    save_checkpoint(out_ckpt, ckpt);
    if (history_path.empty()) history_path = out_ckpt + ".history.csv";
    write_file(history_path, res.trained.history.to_csv());

    std::cout << "train " << res.train_idx.size() << " / val " << res.val_idx.size() << " / test "
              << res.test_idx.size() << " patients; best epoch "
              << res.trained.history.best_epoch << "\n";
    std::cout << "held-out test metrics:\n" << metrics_table(res.gcn, "Triplet-GCN");
    std::cout << "saved " << out_ckpt << " and " << history_path << "\n";
    return 0;
}

int cmd_eval(const GlobalOpts& g, const std::string& ckpt_path, const std::string& schema_path,
             const std::string& triplets_path, const std::string& labels_path,
             const std::string& out_json) {
    PipelineConfig cfg = load_config(g);
    Checkpoint ckpt = load_checkpoint(ckpt_path);
    Cohort cohort = load_cohort(schema_path, triplets_path, labels_path);
    check_fingerprint(ckpt, cohort.schema);

    std::vector<double> probs = predict_probs(cohort, ckpt.stats, ckpt.params, ckpt.config);
    MetricsReport report =
        evaluate(probs, *cohort.labels, cfg.threshold, cfg.n_boot, bootstrap_seed(cfg));
    std::cout << metrics_table(report, "Triplet-GCN");
    write_file(out_json, metrics_to_json(report));
    std::cout << "wrote " << out_json << "\n";
    return 0;
}

int cmd_predict(const GlobalOpts& g, const std::string& ckpt_path, const std::string& schema_path,
                const std::string& triplets_path, const std::string& out_csv) {
    load_config(g);  // validates config/seed flags even though none apply here
    Checkpoint ckpt = load_checkpoint(ckpt_path);
    Cohort cohort = load_cohort(schema_path, triplets_path, "");
    check_fingerprint(ckpt, cohort.schema);

    std::vector<double> probs = predict_probs(cohort, ckpt.stats, ckpt.params, ckpt.config);
    std::string out = "patient_id,score\n";
    for (std::size_t i = 0; i < probs.size(); ++i)
        out += std::to_string(i) + "," + format_fixed(probs[i], 6) + "\n";
    write_file(out_csv, out);
    std::cout << "wrote " << probs.size() << " scores to " << out_csv << "\n";
    return 0;
}

int cmd_baseline(const GlobalOpts& g, const std::string& schema_path,
                 const std::string& triplets_path, const std::string& labels_path,
                 const std::string& out_json) {
    PipelineConfig cfg = load_config(g);
    Cohort cohort = load_cohort(schema_path, triplets_path, labels_path);
    const std::vector<int>& labels = *cohort.labels;

    SplitResult split = experiment_split(labels, cfg);
    PreprocessStats stats = fit(cohort, split.train_idx, cfg.train.stats_after_impute);
    DenseDesign design = densify(transform(cohort, stats));

    std::vector<int> train_y;
    for (int i : split.train_idx) train_y.push_back(labels[static_cast<std::size_t>(i)]);
    std::vector<int> test_y;
    for (int i : split.test_idx) test_y.push_back(labels[static_cast<std::size_t>(i)]);
    std::vector<double> scores = knn_score(design_rows(design, split.train_idx), train_y,
                                           design_rows(design, split.test_idx), cfg.knn_k);

    MetricsReport report = evaluate(scores, test_y, cfg.threshold, cfg.n_boot, bootstrap_seed(cfg));
    std::cout << metrics_table(report, "KNN (k=" + std::to_string(cfg.knn_k) + ")");
    write_file(out_json, metrics_to_json(report));
    std::cout << "wrote " << out_json << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triplet GCN pipeline: bipartite patient-feature graphs over EHR triplets"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "key=value config file");
    app.add_option("--seed", g.seed, "override the config seed");
    app.add_flag("--deterministic", g.deterministic,
                 "freeze timestamps so identical runs are byte-identical");

    auto* synth = app.add_subcommand("synth", "generate a synthetic cohort");
    std::string out_dir = ".";
    synth->add_option("--out-dir", out_dir, "output directory");

    auto* train = app.add_subcommand("train", "train on a labeled cohort");
    std::string schema_path, triplets_path, labels_path;
    std::string out_ckpt = "model.ckpt", history_path, out_json = "metrics.json";
    std::string ckpt_path, out_csv = "predictions.csv";
    train->add_option("--schema", schema_path, "schema JSON")->required();
    train->add_option("--triplets", triplets_path, "triplet CSV")->required();
    train->add_option("--labels", labels_path, "label CSV")->required();
    train->add_option("--out", out_ckpt, "checkpoint output path");
    train->add_option("--history", history_path, "history CSV path (default <out>.history.csv)");

    auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a labeled cohort");
    eval->add_option("--checkpoint", ckpt_path, "checkpoint path")->required();
    eval->add_option("--schema", schema_path, "schema JSON")->required();
    eval->add_option("--triplets", triplets_path, "triplet CSV")->required();
    eval->add_option("--labels", labels_path, "label CSV")->required();
    eval->add_option("--json", out_json, "metrics JSON output path");

    auto* predict = app.add_subcommand("predict", "score an unlabeled cohort");
    predict->add_option("--checkpoint", ckpt_path, "checkpoint path")->required();
    predict->add_option("--schema", schema_path, "schema JSON")->required();
    predict->add_option("--triplets", triplets_path, "triplet CSV")->required();
    predict->add_option("--out", out_csv, "prediction CSV path");

    auto* baseline = app.add_subcommand("baseline", "KNN baseline on the same split");
    baseline->add_option("--schema", schema_path, "schema JSON")->required();
    baseline->add_option("--triplets", triplets_path, "triplet CSV")->required();
    baseline->add_option("--labels", labels_path, "label CSV")->required();
    baseline->add_option("--json", out_json, "metrics JSON output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(g, out_dir);
        if (train->parsed())
            return cmd_train(g, schema_path, triplets_path, labels_path, out_ckpt, history_path);
        if (eval->parsed())
            return cmd_eval(g, ckpt_path, schema_path, triplets_path, labels_path, out_json);
        if (predict->parsed()) return cmd_predict(g, ckpt_path, schema_path, triplets_path, out_csv);
        if (baseline->parsed())
            return cmd_baseline(g, schema_path, triplets_path, labels_path, out_json);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
