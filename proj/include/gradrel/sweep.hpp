#pragma once
// Experiment orchestration: monolingual threshold x size grids, mixture
// deltas, and cross-lingual delta matrices. Cells are pure functions of
// (config, derived seed, inputs); reports are canonical by key order.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gradrel/core.hpp"
#include "gradrel/encoder.hpp"
#include "gradrel/retrieval.hpp"
#include "gradrel/synth.hpp"

namespace gradrel {

enum class UseCase { monolingual, mixture, crosslingual };
enum class BaselineKind { untrained, frozen_initial };

std::string to_string(UseCase uc);

struct LanguageData {
    LanguageTag language;
    std::vector<Passage> corpus;
    std::vector<Query> train_queries;
    std::vector<GradedInstance> train_instances;  // single annotator
    std::vector<Query> eval_queries;
    Qrels eval_qrels;  // ground-truth judgments for the eval queries
};

struct SweepInputs {
    std::map<std::string, LanguageData> by_language;
    // (query language, corpus language) -> qrels; same-language pairs fall
    // back to eval_qrels
    std::map<std::pair<std::string, std::string>, Qrels> cross_qrels;
};

// Desk-scale dataset: generated corpus, annotated training instances (with
// the config's noise profile when annotator_id != "truth"), held-out eval
// queries with truth qrels, and structurally parallel cross-lingual qrels.
SweepInputs build_synthetic_inputs(const SynthConfig& config,
                                   std::size_t eval_queries_per_language,
                                   const std::string& annotator_id);

struct SweepConfig {
    UseCase use_case = UseCase::monolingual;
    std::vector<int> thresholds = {1, 2, 3};
    std::vector<std::size_t> sizes;  // monolingual: training-set size ladder
    std::vector<std::string> languages;
    // mixture: (target, additional); empty additional lists reduce to solo
    std::vector<std::pair<std::string, std::string>> language_pairs;
    std::size_t mixture_count = 0;  // per-language instances in a mixture
    std::string annotator_id = "truth";
    BaselineKind baseline = BaselineKind::untrained;
    std::uint64_t seed = 0;
    std::size_t parallelism = 1;

    // model and training knobs, recorded in provenance
    FeatureHasher hasher;
    std::size_t embedding_dim = 64;
    double temperature = 0.05;
    TrainConfig train;  // per-cell seed is derived, this seed field is ignored
    std::size_t eval_cutoff = 10;
    GainFunction gain = GainFunction::exponential;

    // experimental: per-language tau inside a mixture; languages absent from
    // the map use the cell's tau
    std::map<std::string, int> per_language_tau;
};

struct CellResult {
    std::string key;
    std::map<std::string, std::string> fields;  // lang, tau, size, ...
    double value = 0.0;
    std::string status = "ok";  // or the error message
    bool ok() const { return status == "ok"; }
};

struct DeltaRow {
    std::string key;
    std::map<std::string, std::string> fields;
    double base = 0.0;
    double delta_abs = 0.0;
    double delta_pct = 0.0;  // 100 * delta / base
    bool defined = true;     // false when |base| < 1e-9
};

struct SweepReport {
    UseCase use_case = UseCase::monolingual;
    std::map<std::string, CellResult> cells;
    std::vector<DeltaRow> deltas;
    std::string provenance_json;
};

SweepReport run_monolingual(const SweepConfig& config, const SweepInputs& inputs);
SweepReport run_mixture(const SweepConfig& config, const SweepInputs& inputs);
SweepReport run_crosslingual(const SweepConfig& config, const SweepInputs& inputs);
SweepReport run_sweep(const SweepConfig& config, const SweepInputs& inputs);

// Derived, never stored: recomputing from cells must match report.deltas.
std::vector<DeltaRow> compute_deltas(const SweepConfig& config,
                                     const std::map<std::string, CellResult>& cells);

// "+0.056 (+7.4%)" formatting for delta tables.
std::string format_delta(const DeltaRow& row);

// Bundle: cells.csv, deltas.csv, provenance.json, SVG plots.
void write_report_bundle(const SweepReport& report, const std::string& dir);

std::string cells_csv(const SweepReport& report);
std::string deltas_csv(const SweepReport& report);

}  // namespace gradrel
