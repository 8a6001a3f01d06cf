// gradrel: operator surface for the graded-relevance threshold toolkit.
// Subcommands wrap the library modules into reproducible pipelines; all
// randomness flows from --seed and every run records its effective config.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gradrel/agreement.hpp"
#include "gradrel/binarize.hpp"
#include "gradrel/core.hpp"
#include "gradrel/dataset_io.hpp"
#include "gradrel/encoder.hpp"
#include "gradrel/retrieval.hpp"
#include "gradrel/rng.hpp"
#include "gradrel/sampling.hpp"
#include "gradrel/svg.hpp"
#include "gradrel/sweep.hpp"
#include "gradrel/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::size_t threads = 1;
    std::string log_level = "info";
    std::string format = "json";
};

void log_info(const GlobalOpts& g, const std::string& msg) {
    if (g.log_level == "info" || g.log_level == "debug") std::cerr << "[info] " << msg << "\n";
}

void write_text(const fs::path& path, const std::string& body) {
    fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

void write_provenance(const GlobalOpts& g, const std::string& command,
                      const ordered_json& flags) {
    ordered_json j;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["seed"] = g.seed;
    j["out_dir"] = g.out_dir;
    j["threads"] = g.threads;
    j["flags"] = flags;
    write_text(fs::path(g.out_dir) / "provenance.json", j.dump(2) + "\n");
}

// "fi:low,ja:medium" or bare codes (tier defaults by code).
std::vector<gradrel::LanguageTag> parse_languages(const std::string& spec) {
    std::vector<gradrel::LanguageTag> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            out.push_back(gradrel::LanguageTag::make(item, gradrel::default_tier(item)));
        } else {
            out.push_back(gradrel::LanguageTag::make(
                item.substr(0, colon), gradrel::tier_from_string(item.substr(colon + 1))));
        }
    }
    if (out.empty()) throw std::invalid_argument("no languages in '" + spec + "'");
    return out;
}

gradrel::GainFunction parse_gain(const std::string& s) {
    if (s == "exponential") return gradrel::GainFunction::exponential;
    if (s == "linear") return gradrel::GainFunction::linear;
    throw std::invalid_argument("gain must be exponential or linear, got '" + s + "'");
}

std::map<std::string, std::string> query_texts(const gradrel::Dataset& ds) {
    std::map<std::string, std::string> m;
    for (const auto& q : ds.queries) m[q.id] = q.text;
    return m;
}

std::map<std::string, std::string> passage_texts(const gradrel::Dataset& ds) {
    std::map<std::string, std::string> m;
    for (const auto& p : ds.passages) m[p.id] = p.text;
    return m;
}

// ---- synth ----

struct SynthOpts {
    std::string languages;
    std::size_t passages = 100;
    std::size_t queries = 20;
    std::size_t candidates = 5;
    std::string output;
};

int cmd_synth(const GlobalOpts& g, const SynthOpts& o) {
    gradrel::SynthConfig cfg;
    cfg.seed = g.seed;
    cfg.languages = parse_languages(o.languages);
    cfg.passages_per_language = o.passages;
    cfg.queries_per_language = o.queries;
    cfg.candidates_per_query = o.candidates;
    auto out = gradrel::generate(cfg);

    const std::string path =
        o.output.empty() ? (fs::path(g.out_dir) / "dataset.jsonl").string() : o.output;
    gradrel::write_dataset(out.as_dataset(), path);

    ordered_json flags;
    flags["languages"] = o.languages;
    flags["passages"] = o.passages;
    flags["queries"] = o.queries;
    flags["candidates"] = o.candidates;
    flags["output"] = path;
    write_provenance(g, "synth", flags);

    ordered_json summary;
    summary["output"] = path;
    summary["queries"] = out.queries.size();
    summary["passages"] = out.passages.size();
    summary["instances"] = out.true_instances.size();
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

// ---- ingest ----

int cmd_ingest(const GlobalOpts& g, const std::string& input) {
    auto ds = gradrel::read_dataset(input);
    auto report = gradrel::validate_dataset(ds);
    ordered_json j;
    j["file"] = input;
    j["queries"] = ds.queries.size();
    j["passages"] = ds.passages.size();
    j["instances"] = ds.instances.size();
    j["accepted"] = report.accepted();
    j["dangling_references"] = report.dangling_references;
    j["duplicate_keys"] = report.duplicate_keys;
    j["language_mismatches"] = report.language_mismatches;
    j["unannotated_queries"] = report.unannotated_queries;
    ordered_json flags;
    flags["input"] = input;
    write_provenance(g, "ingest", flags);
    if (!report.accepted()) {
        std::cerr << j.dump(2) << "\n";
        return kExitInvalid;
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

// ---- sample ----

struct SampleOpts {
    std::string input;
    std::string output;
    std::size_t target = 0;  // downsample mode
    std::string mixture_target;
    std::size_t mixture_count = 0;
    std::string mixture_additional;
    std::size_t mixture_additional_count = 0;
};

int cmd_sample(const GlobalOpts& g, const SampleOpts& o) {
    auto ds = gradrel::read_dataset(o.input);
    const std::string path =
        o.output.empty() ? (fs::path(g.out_dir) / "sampled.jsonl").string() : o.output;

    ordered_json flags;
    flags["input"] = o.input;
    flags["output"] = path;

    if (o.target > 0 && !o.mixture_target.empty()) {
        throw std::invalid_argument("choose either --target or --mixture-target, not both");
    }
    gradrel::Dataset out = ds;
    if (o.target > 0) {
        auto split = gradrel::distribution_matched_downsample(ds.instances, o.target, g.seed);
        out.instances = split.instances;
        write_text(fs::path(g.out_dir) / "sampling_manifest.json",
                   gradrel::sampling_manifest_json(ds.instances, split, g.seed));
        flags["target"] = o.target;
    } else if (!o.mixture_target.empty()) {
        gradrel::MixtureSpec spec;
        spec.target_language = parse_languages(o.mixture_target)[0];
        spec.target_count = o.mixture_count;
        if (!o.mixture_additional.empty()) {
            spec.additional_language = parse_languages(o.mixture_additional)[0];
            spec.additional_count = o.mixture_additional_count;
        }
        spec.seed = g.seed;
        out.instances = gradrel::build_mixture(ds.instances, spec);
        flags["mixture_target"] = o.mixture_target;
        flags["mixture_count"] = o.mixture_count;
        flags["mixture_additional"] = o.mixture_additional;
        flags["mixture_additional_count"] = o.mixture_additional_count;
    } else {
        throw std::invalid_argument("sample needs --target or --mixture-target");
    }
    gradrel::write_dataset(out, path);
    write_provenance(g, "sample", flags);

    ordered_json summary;
    summary["output"] = path;
    summary["instances"] = out.instances.size();
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

// ---- binarize ----

struct BinarizeOpts {
    std::string input;
    int tau = 0;
    std::string annotator = gradrel::kTruthAnnotator;
};

int cmd_binarize(const GlobalOpts& g, const BinarizeOpts& o) {
    auto ds = gradrel::read_dataset(o.input);
    auto set = gradrel::binarize(ds.instances, gradrel::Threshold(o.tau), o.annotator);
    ordered_json flags;
    flags["input"] = o.input;
    flags["tau"] = o.tau;
    flags["annotator"] = o.annotator;
    write_provenance(g, "binarize", flags);
    std::cout << set.balance_json() << "\n";
    return kExitOk;
}

// ---- agree ----

struct AgreeOpts {
    std::string file_a;
    std::string file_b;
};

int cmd_agree(const GlobalOpts& g, const AgreeOpts& o) {
    auto a = gradrel::read_dataset(o.file_a);
    auto b = gradrel::read_dataset(o.file_b);
    auto paired = gradrel::pair_annotations(a.instances, b.instances);
    const double kappa = gradrel::quadratic_weighted_kappa(paired.matrix);
    auto rn = gradrel::row_normalize(paired.matrix);

    gradrel::HeatmapSpec hm;
    hm.title = "annotator agreement (row-normalized)";
    hm.row_labels = {"0", "1", "2", "3"};
    hm.col_labels = {"0", "1", "2", "3"};
    for (int i = 0; i < gradrel::kNumGrades; ++i) {
        hm.values.emplace_back(rn.proportions[i].begin(), rn.proportions[i].end());
    }
    write_text(fs::path(g.out_dir) / "agreement_heatmap.svg", gradrel::render_heatmap(hm));

    ordered_json flags;
    flags["a"] = o.file_a;
    flags["b"] = o.file_b;
    write_provenance(g, "agree", flags);

    if (g.format == "csv") {
        std::cout << "kappa," << kappa << "\n" << gradrel::heatmap_csv(rn);
    } else {
        ordered_json j;
        j["kappa"] = kappa;
        j["paired"] = paired.matrix.total();
        j["unmatched_a"] = paired.unmatched_a.size();
        j["unmatched_b"] = paired.unmatched_b.size();
        std::cout << j.dump(2) << "\n";
    }
    return kExitOk;
}

// ---- train ----

struct TrainOpts {
    std::string input;
    int tau = 0;
    std::string annotator = gradrel::kTruthAnnotator;
    std::string model;
    std::size_t dim = 64;
    std::uint32_t buckets = 1u << 15;
    double temperature = 0.05;
    std::size_t batch_size = 32;
    std::size_t epochs = 2;
    double lr = 1e-6;
    double warmup = 0.05;
};

int cmd_train(const GlobalOpts& g, const TrainOpts& o) {
    auto ds = gradrel::read_dataset(o.input);
    auto set = gradrel::binarize(ds.instances, gradrel::Threshold(o.tau), o.annotator);

    gradrel::FeatureHasher hasher;
    hasher.num_buckets = o.buckets;
    gradrel::TrainConfig tc;
    tc.batch_size = o.batch_size;
    tc.epochs = o.epochs;
    tc.learning_rate = o.lr;
    tc.warmup_ratio = o.warmup;
    tc.seed = g.seed;

    auto init = gradrel::init_params(hasher, o.dim, o.temperature,
                                     gradrel::derive_seed(g.seed, "cli-train-init"));
    auto result = gradrel::train(init, set, query_texts(ds), passage_texts(ds), tc);

    const std::string path =
        o.model.empty() ? (fs::path(g.out_dir) / "model.bin").string() : o.model;
    gradrel::save_checkpoint(result.params, path);

    ordered_json flags;
    flags["input"] = o.input;
    flags["tau"] = o.tau;
    flags["annotator"] = o.annotator;
    flags["model"] = path;
    flags["dim"] = o.dim;
    flags["buckets"] = o.buckets;
    flags["temperature"] = o.temperature;
    flags["training"] = ordered_json::parse(gradrel::train_config_json(tc));
    write_provenance(g, "train", flags);

    ordered_json summary;
    summary["model"] = path;
    summary["positives"] = set.positives.size();
    summary["negatives"] = set.negatives.size();
    summary["steps"] = result.loss_trace.size();
    summary["final_loss"] = result.loss_trace.empty() ? 0.0 : result.loss_trace.back();
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

// ---- eval ----

struct EvalOpts {
    std::string model;
    std::string corpus;   // dataset file supplying passages
    std::string queries;  // dataset file supplying queries (may equal corpus)
    std::string qrels;
    std::size_t cutoff = 10;
    std::string gain = "exponential";
    std::string run_out;
};

int cmd_eval(const GlobalOpts& g, const EvalOpts& o) {
    auto params = gradrel::load_checkpoint(o.model);
    auto corpus = gradrel::read_dataset(o.corpus);
    auto queries = o.queries.empty() || o.queries == o.corpus
                       ? corpus
                       : gradrel::read_dataset(o.queries);
    auto qrels = gradrel::read_qrels(o.qrels);

    auto index = gradrel::build_index(params, corpus.passages);
    gradrel::RunResult run;
    for (const auto& q : queries.queries) {
        auto emb = gradrel::embed(params, params.hasher.featurize(q.text));
        run.ranked[q.id] = gradrel::search(index, emb, o.cutoff);
    }
    auto ndcg = gradrel::ndcg_at_k(run, qrels, o.cutoff, parse_gain(o.gain));
    if (!o.run_out.empty()) gradrel::write_run(run, o.run_out);

    ordered_json flags;
    flags["model"] = o.model;
    flags["corpus"] = o.corpus;
    flags["queries"] = o.queries;
    flags["qrels"] = o.qrels;
    flags["cutoff"] = o.cutoff;
    flags["gain"] = o.gain;
    write_provenance(g, "eval", flags);

    const std::string metric = "ndcg@" + std::to_string(o.cutoff);
    if (g.format == "csv") {
        std::cout << "metric,value,queries,zero_idcg\n"
                  << metric << "," << ndcg.macro_average << "," << ndcg.per_query.size() << ","
                  << ndcg.zero_idcg_queries << "\n";
    } else {
        ordered_json j;
        j[metric] = ndcg.macro_average;
        j["queries"] = ndcg.per_query.size();
        j["zero_idcg_queries"] = ndcg.zero_idcg_queries;
        std::cout << j.dump(2) << "\n";
    }
    return kExitOk;
}

// ---- sweep ----

gradrel::SweepConfig sweep_config_from_json(const ordered_json& j, const GlobalOpts& g) {
    gradrel::SweepConfig cfg;
    const std::string uc = j.value("use_case", "monolingual");
    if (uc == "monolingual") cfg.use_case = gradrel::UseCase::monolingual;
    else if (uc == "mixture") cfg.use_case = gradrel::UseCase::mixture;
    else if (uc == "crosslingual") cfg.use_case = gradrel::UseCase::crosslingual;
    else throw std::invalid_argument("unknown use_case '" + uc + "'");

    cfg.seed = j.value("seed", g.seed);
    cfg.parallelism = g.threads;
    cfg.annotator_id = j.value("annotator", std::string(gradrel::kTruthAnnotator));
    if (j.contains("thresholds")) cfg.thresholds = j["thresholds"].get<std::vector<int>>();
    if (j.contains("sizes")) cfg.sizes = j["sizes"].get<std::vector<std::size_t>>();
    if (j.contains("languages")) {
        cfg.languages = j["languages"].get<std::vector<std::string>>();
    }
    if (j.contains("language_pairs")) {
        for (const auto& pair : j["language_pairs"]) {
            cfg.language_pairs.emplace_back(pair.at(0).get<std::string>(),
                                            pair.size() > 1 ? pair.at(1).get<std::string>()
                                                            : std::string());
        }
    }
    cfg.mixture_count = j.value("mixture_count", std::size_t{0});
    if (j.value("baseline", "untrained") == "frozen_initial") {
        cfg.baseline = gradrel::BaselineKind::frozen_initial;
    }
    if (j.contains("model")) {
        const auto& m = j["model"];
        cfg.embedding_dim = m.value("embedding_dim", cfg.embedding_dim);
        cfg.hasher.num_buckets = m.value("num_buckets", cfg.hasher.num_buckets);
        if (m.contains("n_gram_sizes")) {
            cfg.hasher.n_gram_sizes = m["n_gram_sizes"].get<std::vector<int>>();
        }
        cfg.hasher.hash_seed = m.value("hash_seed", cfg.hasher.hash_seed);
        cfg.temperature = m.value("temperature", cfg.temperature);
    }
    if (j.contains("train")) {
        const auto& t = j["train"];
        cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
        cfg.train.epochs = t.value("epochs", cfg.train.epochs);
        cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
        cfg.train.warmup_ratio = t.value("warmup_ratio", cfg.train.warmup_ratio);
    }
    cfg.eval_cutoff = j.value("eval_cutoff", cfg.eval_cutoff);
    cfg.gain = parse_gain(j.value("gain", "exponential"));
    if (j.contains("per_language_tau")) {
        for (const auto& [code, tau] : j["per_language_tau"].items()) {
            cfg.per_language_tau[code] = tau.get<int>();
        }
    }
    return cfg;
}

gradrel::SynthConfig synth_config_from_json(const ordered_json& j, std::uint64_t seed) {
    gradrel::SynthConfig cfg;
    cfg.seed = j.value("seed", seed);
    std::string langs;
    for (const auto& item : j.at("languages")) {
        if (!langs.empty()) langs += ",";
        langs += item.get<std::string>();
    }
    cfg.languages = parse_languages(langs);
    cfg.passages_per_language = j.value("passages_per_language", cfg.passages_per_language);
    cfg.queries_per_language = j.value("queries_per_language", cfg.queries_per_language);
    cfg.candidates_per_query = j.value("candidates_per_query", cfg.candidates_per_query);
    if (j.contains("noise_profile")) {
        for (const auto& [tier, rows] : j["noise_profile"].items()) {
            gradrel::ConfusionMatrix m;
            for (int i = 0; i < gradrel::kNumGrades; ++i) {
                for (int k = 0; k < gradrel::kNumGrades; ++k) {
                    m.rows[i][k] = rows.at(i).at(k).get<double>();
                }
            }
            cfg.noise_profile.by_tier[gradrel::tier_from_string(tier)] = m;
        }
        cfg.noise_profile.validate();
    }
    return cfg;
}

int cmd_sweep(const GlobalOpts& g, const std::string& experiment_file) {
    std::ifstream in(experiment_file);
    if (!in) throw std::invalid_argument("cannot open experiment file " + experiment_file);
    ordered_json j = ordered_json::parse(in);

    auto cfg = sweep_config_from_json(j, g);
    auto synth_cfg = synth_config_from_json(j.at("synth"), cfg.seed);
    const auto eval_queries =
        j.at("synth").value("eval_queries_per_language", std::size_t{50});
    log_info(g, "building synthetic inputs");
    auto inputs = gradrel::build_synthetic_inputs(synth_cfg, eval_queries, cfg.annotator_id);
    log_info(g, "running sweep");
    auto report = gradrel::run_sweep(cfg, inputs);

    // fold the CLI invocation into the bundle provenance
    ordered_json prov = ordered_json::parse(report.provenance_json);
    ordered_json cli;
    cli["experiment_file"] = experiment_file;
    cli["out_dir"] = g.out_dir;
    cli["threads"] = g.threads;
    prov["cli"] = cli;
    prov["synth"] = j.at("synth");
    report.provenance_json = prov.dump(2);

    gradrel::write_report_bundle(report, g.out_dir);

    std::size_t failed = 0;
    for (const auto& [key, cell] : report.cells) {
        (void)key;
        if (!cell.ok()) ++failed;
    }
    ordered_json summary;
    summary["bundle"] = g.out_dir;
    summary["cells"] = report.cells.size();
    summary["failed_cells"] = failed;
    summary["deltas"] = report.deltas.size();
    std::cout << summary.dump(2) << "\n";
    return failed == 0 ? kExitOk : kExitInternal;
}

// ---- report ----

int cmd_report(const GlobalOpts& g, const std::string& bundle_dir) {
    const fs::path cells = fs::path(bundle_dir) / "cells.csv";
    if (!fs::exists(cells)) {
        throw std::invalid_argument("no cells.csv in " + bundle_dir);
    }
    std::ifstream in(cells);
    std::string header;
    std::getline(in, header);
    if (g.format == "csv") {
        std::cout << header << "\n" << in.rdbuf();
        return kExitOk;
    }
    std::vector<std::string> columns;
    std::stringstream hs(header);
    std::string col;
    while (std::getline(hs, col, ',')) columns.push_back(col);
    ordered_json rows = ordered_json::array();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json row;
        std::stringstream ls(line);
        std::string cell;
        std::size_t i = 0;
        while (std::getline(ls, cell, ',') && i < columns.size()) row[columns[i++]] = cell;
        rows.push_back(std::move(row));
    }
    std::cout << rows.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graded-relevance binarization toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "master random seed");
    app.add_option("--out-dir", g.out_dir, "artifact directory");
    app.add_option("--threads", g.threads, "worker threads (sweep cells)");
    app.add_option("--log-level", g.log_level, "quiet|info|debug")
        ->check(CLI::IsMember({"quiet", "info", "debug"}));
    app.add_option("--format", g.format, "output format for read-style commands")
        ->check(CLI::IsMember({"json", "csv"}));

    SynthOpts synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
    synth_cmd->add_option("--languages", synth.languages, "code[:tier],... list")->required();
    synth_cmd->add_option("--passages", synth.passages, "passages per language");
    synth_cmd->add_option("--queries", synth.queries, "queries per language");
    synth_cmd->add_option("--candidates", synth.candidates, "judged candidates per query");
    synth_cmd->add_option("--output", synth.output, "dataset path (.jsonl or .jsonl.gz)");

    std::string ingest_file;
    auto* ingest_cmd = app.add_subcommand("ingest", "validate an external dataset");
    ingest_cmd->add_option("file", ingest_file, "dataset file")->required();

    SampleOpts sample;
    auto* sample_cmd = app.add_subcommand("sample", "downsample or build a mixture");
    sample_cmd->add_option("--input", sample.input, "dataset file")->required();
    sample_cmd->add_option("--output", sample.output, "output dataset path");
    sample_cmd->add_option("--target", sample.target, "per-language target for downsampling");
    sample_cmd->add_option("--mixture-target", sample.mixture_target, "mixture target language");
    sample_cmd->add_option("--mixture-count", sample.mixture_count,
                           "instances per mixture language");
    sample_cmd->add_option("--mixture-additional", sample.mixture_additional,
                           "additional mixture language");
    sample_cmd->add_option("--mixture-additional-count", sample.mixture_additional_count,
                           "additional language instance count");

    BinarizeOpts binarize;
    auto* binarize_cmd = app.add_subcommand("binarize", "threshold graded scores");
    binarize_cmd->add_option("--input", binarize.input, "dataset file")->required();
    binarize_cmd->add_option("--tau", binarize.tau, "threshold in 1..3")->required();
    binarize_cmd->add_option("--annotator", binarize.annotator, "annotator id");

    AgreeOpts agree;
    auto* agree_cmd = app.add_subcommand("agree", "annotator agreement");
    agree_cmd->add_option("--a", agree.file_a, "first annotator's dataset")->required();
    agree_cmd->add_option("--b", agree.file_b, "second annotator's dataset")->required();

    TrainOpts train;
    auto* train_cmd = app.add_subcommand("train", "train the dual encoder");
    train_cmd->add_option("--input", train.input, "dataset file")->required();
    train_cmd->add_option("--tau", train.tau, "binarization threshold")->required();
    train_cmd->add_option("--annotator", train.annotator, "annotator id");
    train_cmd->add_option("--model", train.model, "checkpoint output path");
    train_cmd->add_option("--dim", train.dim, "embedding dimension");
    train_cmd->add_option("--buckets", train.buckets, "hash buckets (power of two)");
    train_cmd->add_option("--temperature", train.temperature, "InfoNCE temperature");
    train_cmd->add_option("--batch-size", train.batch_size, "training batch size");
    train_cmd->add_option("--epochs", train.epochs, "training epochs");
    train_cmd->add_option("--lr", train.lr, "learning rate");
    train_cmd->add_option("--warmup", train.warmup, "warm-up ratio");

    EvalOpts eval;
    auto* eval_cmd = app.add_subcommand("eval", "retrieve and score against qrels");
    eval_cmd->add_option("--model", eval.model, "checkpoint path")->required();
    eval_cmd->add_option("--corpus", eval.corpus, "dataset file with passages")->required();
    eval_cmd->add_option("--queries", eval.queries, "dataset file with queries");
    eval_cmd->add_option("--qrels", eval.qrels, "qrels TSV")->required();
    eval_cmd->add_option("--cutoff", eval.cutoff, "rank cutoff k");
    eval_cmd->add_option("--gain", eval.gain, "exponential|linear");
    eval_cmd->add_option("--run", eval.run_out, "write the run file here");

    std::string experiment_file;
    auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment grid");
    sweep_cmd->add_option("experiment", experiment_file, "declarative experiment JSON")
        ->required();

    std::string bundle_dir;
    auto* report_cmd = app.add_subcommand("report", "re-render an existing report bundle");
    report_cmd->add_option("--bundle", bundle_dir, "report bundle directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(g, synth);
        if (ingest_cmd->parsed()) return cmd_ingest(g, ingest_file);
        if (sample_cmd->parsed()) return cmd_sample(g, sample);
        if (binarize_cmd->parsed()) return cmd_binarize(g, binarize);
        if (agree_cmd->parsed()) return cmd_agree(g, agree);
        if (train_cmd->parsed()) return cmd_train(g, train);
        if (eval_cmd->parsed()) return cmd_eval(g, eval);
        if (sweep_cmd->parsed()) return cmd_sweep(g, experiment_file);
        if (report_cmd->parsed()) return cmd_report(g, bundle_dir);
    } catch (const gradrel::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInvalid;
}
