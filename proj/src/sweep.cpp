#include "gradrel/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "gradrel/binarize.hpp"
#include "gradrel/rng.hpp"
#include "gradrel/sampling.hpp"
#include "gradrel/svg.hpp"
#include "json.hpp"

namespace gradrel {

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr double kDeltaDenominatorFloor = 1e-9;

std::string fmt_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

std::map<std::string, std::string> text_map_q(const std::vector<Query>& qs) {
    std::map<std::string, std::string> m;
    for (const auto& q : qs) m[q.id] = q.text;
    return m;
}

std::map<std::string, std::string> text_map_p(const std::vector<Passage>& ps) {
    std::map<std::string, std::string> m;
    for (const auto& p : ps) m[p.id] = p.text;
    return m;
}

const LanguageData& lang_data(const SweepInputs& inputs, const std::string& code) {
    auto it = inputs.by_language.find(code);
    if (it == inputs.by_language.end()) {
        throw std::invalid_argument("sweep: no data for language '" + code + "'");
    }
    return it->second;
}

// Binarize a (possibly mixed) instance set, honoring per-language tau
// overrides. Overridden languages are partitioned at their own cutoff and the
// contrastive sets merged.
ContrastiveSet binarize_with_overrides(const std::vector<GradedInstance>& instances, int tau,
                                       const std::map<std::string, int>& per_language_tau,
                                       const std::string& annotator) {
    if (per_language_tau.empty()) return binarize(instances, Threshold(tau), annotator);
    std::map<int, std::vector<GradedInstance>> by_tau;
    for (const auto& gi : instances) {
        auto it = per_language_tau.find(gi.language.code);
        by_tau[it == per_language_tau.end() ? tau : it->second].push_back(gi);
    }
    ContrastiveSet merged;
    merged.tau = Threshold(tau);
    merged.annotator_id = annotator;
    merged.empty_input = instances.empty();
    for (const auto& [t, group] : by_tau) {
        ContrastiveSet part = binarize(group, Threshold(t), annotator);
        merged.positives.insert(merged.positives.end(), part.positives.begin(),
                                part.positives.end());
        merged.negatives.insert(merged.negatives.end(), part.negatives.begin(),
                                part.negatives.end());
        for (const auto& [code, bal] : part.balance_by_language) {
            merged.balance_by_language[code].positives += bal.positives;
            merged.balance_by_language[code].negatives += bal.negatives;
        }
        merged.queries_without_positives.insert(merged.queries_without_positives.end(),
                                                part.queries_without_positives.begin(),
                                                part.queries_without_positives.end());
    }
    return merged;
}

double evaluate_model(const SweepConfig& config, const EncoderParams& params,
                      const std::vector<Query>& eval_queries,
                      const std::vector<Passage>& corpus, const Qrels& qrels) {
    PassageIndex index = build_index(params, corpus);
    RunResult run;
    for (const auto& q : eval_queries) {
        auto qe = embed(params, params.hasher.featurize(q.text));
        run.ranked[q.id] = search(index, qe, config.eval_cutoff);
    }
    return ndcg_at_k(run, qrels, config.eval_cutoff, config.gain).macro_average;
}

EncoderParams initial_params(const SweepConfig& config, const std::string& label) {
    return init_params(config.hasher, config.embedding_dim, config.temperature,
                       derive_seed(config.seed, label));
}

EncoderParams train_cell_model(const SweepConfig& config, const SweepInputs& inputs,
                               const std::vector<GradedInstance>& instances, int tau,
                               const std::string& init_label, const std::string& cell_key) {
    ContrastiveSet set =
        binarize_with_overrides(instances, tau, config.per_language_tau, config.annotator_id);
    // texts may span several languages in a mixture
    std::map<std::string, std::string> qtexts, ptexts;
    std::set<std::string> langs;
    for (const auto& gi : instances) langs.insert(gi.language.code);
    for (const auto& code : langs) {
        const LanguageData& ld = lang_data(inputs, code);
        auto qm = text_map_q(ld.train_queries);
        auto pm = text_map_p(ld.corpus);
        qtexts.insert(qm.begin(), qm.end());
        ptexts.insert(pm.begin(), pm.end());
    }
    TrainConfig tc = config.train;
    tc.seed = derive_seed(config.seed, cell_key);
    return train(initial_params(config, init_label), set, qtexts, ptexts, tc).params;
}

struct Job {
    std::string key;
    std::function<CellResult()> fn;
};

std::map<std::string, CellResult> run_jobs(std::vector<Job> jobs, std::size_t parallelism) {
    std::vector<CellResult> results(jobs.size());
    auto run_one = [&](std::size_t i) {
        try {
            results[i] = jobs[i].fn();
        } catch (const std::exception& e) {
            results[i].key = jobs[i].key;
            results[i].value = std::nan("");
            results[i].status = e.what();
        }
    };
    if (parallelism <= 1 || jobs.size() <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const std::size_t n = std::min(parallelism, jobs.size());
        for (std::size_t w = 0; w < n; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1)) {
                    run_one(i);
                }
            });
        }
        for (auto& t : workers) t.join();
    }
    std::map<std::string, CellResult> cells;  // canonical key order
    for (auto& r : results) cells[r.key] = std::move(r);
    return cells;
}

std::string provenance(const SweepConfig& config) {
    nlohmann::ordered_json j;
    j["tool_version"] = kToolVersion;
    j["use_case"] = to_string(config.use_case);
    j["seed"] = config.seed;
    j["annotator"] = config.annotator_id;
    j["thresholds"] = config.thresholds;
    j["sizes"] = config.sizes;
    j["languages"] = config.languages;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& [a, b] : config.language_pairs) pairs.push_back({a, b});
    j["language_pairs"] = pairs;
    j["mixture_count"] = config.mixture_count;
    j["baseline"] =
        config.baseline == BaselineKind::untrained ? "untrained" : "frozen_initial";
    j["model"] = {{"embedding_dim", config.embedding_dim},
                  {"num_buckets", config.hasher.num_buckets},
                  {"n_gram_sizes", config.hasher.n_gram_sizes},
                  {"hash_seed", config.hasher.hash_seed},
                  {"signed_hashing", config.hasher.use_sign},
                  {"temperature", config.temperature}};
    j["training"] = nlohmann::ordered_json::parse(train_config_json(config.train));
    j["metrics"] = {{"primary", "ndcg@" + std::to_string(config.eval_cutoff)},
                    {"gain", config.gain == GainFunction::exponential ? "exponential" : "linear"},
                    {"zero_idcg_policy", "scored_zero_and_counted"},
                    {"tie_break", "ascending_passage_id"}};
    if (!config.per_language_tau.empty()) {
        nlohmann::ordered_json plt;
        for (const auto& [code, t] : config.per_language_tau) plt[code] = t;
        j["experimental_per_language_tau"] = plt;
    }
    return j.dump(2);
}

void validate_common(const SweepConfig& config) {
    if (config.thresholds.empty()) throw std::invalid_argument("sweep: no thresholds");
    for (int t : config.thresholds) Threshold check(t);
    for (const auto& [code, t] : config.per_language_tau) {
        (void)code;
        Threshold check(t);
    }
}

}  // namespace

std::string to_string(UseCase uc) {
    switch (uc) {
        case UseCase::monolingual: return "monolingual";
        case UseCase::mixture: return "mixture";
        case UseCase::crosslingual: return "crosslingual";
    }
    throw std::logic_error("unreachable use case");
}

SweepInputs build_synthetic_inputs(const SynthConfig& config,
                                   std::size_t eval_queries_per_language,
                                   const std::string& annotator_id) {
    SynthOutput trainset = generate(config);
    SynthOutput evalset = generate_queries(config, eval_queries_per_language, "eval", "eq");

    std::vector<GradedInstance> annotated =
        annotator_id == kTruthAnnotator
            ? trainset.true_instances
            : annotate_synthetic(trainset.true_instances, config.noise_profile, annotator_id,
                                 derive_seed(config.seed, "annotate"));

    SweepInputs inputs;
    for (const auto& lang : config.languages) {
        LanguageData& ld = inputs.by_language[lang.code];
        ld.language = lang;
    }
    for (const auto& p : trainset.passages) inputs.by_language[p.language.code].corpus.push_back(p);
    for (const auto& q : trainset.queries) {
        inputs.by_language[q.language.code].train_queries.push_back(q);
    }
    for (const auto& gi : annotated) {
        inputs.by_language[gi.language.code].train_instances.push_back(gi);
    }
    std::map<std::string, std::vector<GradedInstance>> eval_truth;
    for (const auto& q : evalset.queries) {
        inputs.by_language[q.language.code].eval_queries.push_back(q);
    }
    for (const auto& gi : evalset.true_instances) eval_truth[gi.language.code].push_back(gi);
    for (auto& [code, truth] : eval_truth) {
        inputs.by_language[code].eval_qrels = qrels_from_instances(truth);
    }

    // Cross-lingual qrels come from the structural parallelism of the
    // generator: passage t of language A corresponds to passage t of B, so a
    // query's judged set transfers by rewriting the id prefix.
    for (const auto& a : config.languages) {
        for (const auto& b : config.languages) {
            if (a.code == b.code) continue;
            Qrels q;
            for (const auto& gi : eval_truth[a.code]) {
                const auto colon = gi.passage_id.find(':');
                q.judgments[{gi.query_id, b.code + gi.passage_id.substr(colon)}] =
                    gi.score.value();
            }
            inputs.cross_qrels[{a.code, b.code}] = q;
        }
    }
    return inputs;
}

SweepReport run_monolingual(const SweepConfig& config, const SweepInputs& inputs) {
    validate_common(config);
    if (config.languages.empty()) throw std::invalid_argument("sweep: no languages");
    if (config.sizes.empty()) throw std::invalid_argument("sweep: no sizes");

    std::vector<Job> jobs;
    for (const auto& code : config.languages) {
        const LanguageData& ld = lang_data(inputs, code);

        // baseline row, mirroring the dashed untrained reference
        jobs.push_back(Job{
            "mono|lang=" + code + "|baseline", [&config, &ld, code] {
                CellResult cell;
                cell.key = "mono|lang=" + code + "|baseline";
                cell.fields = {{"languages", code}, {"tau", ""}, {"size", ""},
                               {"annotator", ""}};
                const std::string label = config.baseline == BaselineKind::untrained
                                              ? "untrained|" + code
                                              : "init|" + code;
                EncoderParams params = initial_params(config, label);
                cell.value = evaluate_model(config, params, ld.eval_queries, ld.corpus,
                                            ld.eval_qrels);
                return cell;
            }});

        auto ladder = size_ladder(ld.train_instances, config.sizes,
                                  derive_seed(config.seed, "ladder|" + code));
        for (int tau : config.thresholds) {
            for (std::size_t si = 0; si < config.sizes.size(); ++si) {
                const std::string key = "mono|lang=" + code + "|tau=" + std::to_string(tau) +
                                        "|size=" + std::to_string(config.sizes[si]);
                auto subset = std::make_shared<std::vector<GradedInstance>>(ladder[si]);
                jobs.push_back(Job{key, [&config, &inputs, &ld, code, tau, si, key, subset] {
                                       CellResult cell;
                                       cell.key = key;
                                       cell.fields = {
                                           {"languages", code},
                                           {"tau", std::to_string(tau)},
                                           {"size", std::to_string(config.sizes[si])},
                                           {"annotator", config.annotator_id}};
                                       EncoderParams model = train_cell_model(
                                           config, inputs, *subset, tau, "init|" + code, key);
                                       cell.value = evaluate_model(config, model,
                                                                   ld.eval_queries, ld.corpus,
                                                                   ld.eval_qrels);
                                       return cell;
                                   }});
            }
        }
    }
    SweepReport report;
    report.use_case = UseCase::monolingual;
    report.cells = run_jobs(std::move(jobs), config.parallelism);
    report.deltas = compute_deltas(config, report.cells);
    report.provenance_json = provenance(config);
    return report;
}

SweepReport run_mixture(const SweepConfig& config, const SweepInputs& inputs) {
    validate_common(config);
    if (config.language_pairs.empty()) throw std::invalid_argument("sweep: no language pairs");
    if (config.mixture_count == 0) throw std::invalid_argument("sweep: mixture_count not set");
    for (const auto& [target, additional] : config.language_pairs) {
        if (!additional.empty() && target == additional) {
            throw std::invalid_argument("sweep: target and additional language must differ");
        }
    }

    std::vector<Job> jobs;
    std::set<std::string> seen;
    auto add_cell = [&](const std::string& target, const std::string& additional, int tau) {
        const std::string key = "mix|target=" + target +
                                "|additional=" + (additional.empty() ? "-" : additional) +
                                "|tau=" + std::to_string(tau);
        if (!seen.insert(key).second) return;
        jobs.push_back(Job{key, [&config, &inputs, target, additional, tau, key] {
            CellResult cell;
            cell.key = key;
            cell.fields = {{"languages", additional.empty() ? target : target + "+" + additional},
                           {"tau", std::to_string(tau)},
                           {"size", std::to_string(config.mixture_count *
                                                   (additional.empty() ? 1 : 2))},
                           {"annotator", config.annotator_id}};
            const LanguageData& tld = lang_data(inputs, target);
            std::vector<GradedInstance> pool = tld.train_instances;
            MixtureSpec spec;
            spec.target_language = tld.language;
            spec.target_count = config.mixture_count;
            spec.seed = derive_seed(config.seed, "mixpool|" + target + "|" + additional);
            if (!additional.empty()) {
                const LanguageData& ald = lang_data(inputs, additional);
                pool.insert(pool.end(), ald.train_instances.begin(), ald.train_instances.end());
                spec.additional_language = ald.language;
                spec.additional_count = config.mixture_count;
            }
            std::vector<GradedInstance> mixed = build_mixture(pool, spec);
            EncoderParams model =
                train_cell_model(config, inputs, mixed, tau, "init|" + target, key);
            cell.value =
                evaluate_model(config, model, tld.eval_queries, tld.corpus, tld.eval_qrels);
            return cell;
        }});
    };
    for (const auto& [target, additional] : config.language_pairs) {
        for (int tau : config.thresholds) {
            add_cell(target, "", tau);  // solo reference cell
            if (!additional.empty()) add_cell(target, additional, tau);
        }
    }

    SweepReport report;
    report.use_case = UseCase::mixture;
    report.cells = run_jobs(std::move(jobs), config.parallelism);
    report.deltas = compute_deltas(config, report.cells);
    report.provenance_json = provenance(config);
    return report;
}

SweepReport run_crosslingual(const SweepConfig& config, const SweepInputs& inputs) {
    validate_common(config);
    if (config.languages.empty()) throw std::invalid_argument("sweep: no languages");

    // one job per (query language, tau): trains the model once, evaluates it
    // against every corpus language
    std::vector<Job> jobs;
    for (const auto& qcode : config.languages) {
        for (int tau : config.thresholds) {
            const std::string model_key =
                "xling-model|q=" + qcode + "|tau=" + std::to_string(tau);
            jobs.push_back(Job{model_key, [&config, &inputs, qcode, tau, model_key] {
                const LanguageData& qld = lang_data(inputs, qcode);
                EncoderParams model = train_cell_model(config, inputs, qld.train_instances,
                                                       tau, "init|" + qcode, model_key);
                // pack per-corpus values into one synthetic multi-cell; the
                // caller splits them below
                CellResult packed;
                packed.key = model_key;
                for (const auto& ccode : config.languages) {
                    const LanguageData& cld = lang_data(inputs, ccode);
                    const Qrels& qrels =
                        ccode == qcode ? qld.eval_qrels
                                       : inputs.cross_qrels.at({qcode, ccode});
                    const double v = evaluate_model(config, model, qld.eval_queries,
                                                    cld.corpus, qrels);
                    char exact[32];  // %.17g round-trips the double
                    std::snprintf(exact, sizeof(exact), "%.17g", v);
                    packed.fields[ccode] = exact;
                }
                return packed;
            }});
        }
    }
    auto packed = run_jobs(std::move(jobs), config.parallelism);

    SweepReport report;
    report.use_case = UseCase::crosslingual;
    for (const auto& qcode : config.languages) {
        for (int tau : config.thresholds) {
            const std::string model_key =
                "xling-model|q=" + qcode + "|tau=" + std::to_string(tau);
            const CellResult& p = packed.at(model_key);
            for (const auto& ccode : config.languages) {
                CellResult cell;
                cell.key = "xling|q=" + qcode + "|c=" + ccode + "|tau=" + std::to_string(tau);
                cell.fields = {{"languages", qcode + "->" + ccode},
                               {"tau", std::to_string(tau)},
                               {"size", ""},
                               {"annotator", config.annotator_id}};
                if (!p.ok()) {
                    cell.status = p.status;
                    cell.value = std::nan("");
                } else {
                    cell.value = std::stod(p.fields.at(ccode));
                }
                report.cells[cell.key] = std::move(cell);
            }
        }
    }
    report.deltas = compute_deltas(config, report.cells);
    report.provenance_json = provenance(config);
    return report;
}

SweepReport run_sweep(const SweepConfig& config, const SweepInputs& inputs) {
    switch (config.use_case) {
        case UseCase::monolingual: return run_monolingual(config, inputs);
        case UseCase::mixture: return run_mixture(config, inputs);
        case UseCase::crosslingual: return run_crosslingual(config, inputs);
    }
    throw std::logic_error("unreachable use case");
}

std::vector<DeltaRow> compute_deltas(const SweepConfig& config,
                                     const std::map<std::string, CellResult>& cells) {
    std::vector<DeltaRow> deltas;
    auto make_row = [](const std::string& key, double base, double other) {
        DeltaRow row;
        row.key = key;
        row.base = base;
        row.delta_abs = other - base;
        if (std::abs(base) < kDeltaDenominatorFloor) {
            row.defined = false;
        } else {
            row.delta_pct = 100.0 * (other - base) / base;
        }
        return row;
    };
    auto ok = [&](const std::string& key) {
        auto it = cells.find(key);
        return it != cells.end() && it->second.ok();
    };

    if (config.use_case == UseCase::monolingual) {
        // trained cell vs the language baseline
        for (const auto& code : config.languages) {
            const std::string bkey = "mono|lang=" + code + "|baseline";
            if (!ok(bkey)) continue;
            const double base = cells.at(bkey).value;
            for (int tau : config.thresholds) {
                for (auto size : config.sizes) {
                    const std::string key = "mono|lang=" + code + "|tau=" + std::to_string(tau) +
                                            "|size=" + std::to_string(size);
                    if (!ok(key)) continue;
                    DeltaRow row = make_row("delta|" + key + "|vs-baseline", base,
                                            cells.at(key).value);
                    row.fields = cells.at(key).fields;
                    deltas.push_back(std::move(row));
                }
            }
        }
    } else if (config.use_case == UseCase::mixture) {
        // mixed vs solo, same target and tau
        for (const auto& [target, additional] : config.language_pairs) {
            if (additional.empty()) continue;
            for (int tau : config.thresholds) {
                const std::string solo =
                    "mix|target=" + target + "|additional=-|tau=" + std::to_string(tau);
                const std::string mixed = "mix|target=" + target + "|additional=" + additional +
                                          "|tau=" + std::to_string(tau);
                if (!ok(solo) || !ok(mixed)) continue;
                DeltaRow row = make_row("delta|" + mixed + "|vs-solo", cells.at(solo).value,
                                        cells.at(mixed).value);
                row.fields = cells.at(mixed).fields;
                deltas.push_back(std::move(row));
            }
        }
    } else {
        // relative change when moving from tau=1 to tau=3
        for (const auto& qcode : config.languages) {
            for (const auto& ccode : config.languages) {
                const std::string k1 = "xling|q=" + qcode + "|c=" + ccode + "|tau=1";
                const std::string k3 = "xling|q=" + qcode + "|c=" + ccode + "|tau=3";
                if (!ok(k1) || !ok(k3)) continue;
                DeltaRow row = make_row("delta|xling|q=" + qcode + "|c=" + ccode + "|tau1-to-3",
                                        cells.at(k1).value, cells.at(k3).value);
                row.fields = {{"languages", qcode + "->" + ccode}};
                deltas.push_back(std::move(row));
            }
        }
    }
    return deltas;
}

std::string format_delta(const DeltaRow& row) {
    char buf[64];
    if (!row.defined) {
        std::snprintf(buf, sizeof(buf), "%+.3f (n/a)", row.delta_abs);
    } else {
        std::snprintf(buf, sizeof(buf), "%+.3f (%+.1f%%)", row.delta_abs, row.delta_pct);
    }
    return buf;
}

std::string cells_csv(const SweepReport& report) {
    std::ostringstream os;
    os << "use_case,languages,tau,size,annotator,metric,value,status\n";
    for (const auto& [key, cell] : report.cells) {
        (void)key;
        auto field = [&](const char* name) {
            auto it = cell.fields.find(name);
            return it == cell.fields.end() ? std::string() : it->second;
        };
        os << to_string(report.use_case) << "," << field("languages") << "," << field("tau")
           << "," << field("size") << "," << field("annotator") << ",ndcg,"
           << (cell.ok() ? fmt_value(cell.value) : "") << ","
           << (cell.ok() ? "ok" : "failed") << "\n";
    }
    return os.str();
}

std::string deltas_csv(const SweepReport& report) {
    std::ostringstream os;
    os << "key,languages,tau,base,delta_abs,delta_pct,defined,label\n";
    for (const auto& row : report.deltas) {
        auto field = [&](const char* name) {
            auto it = row.fields.find(name);
            return it == row.fields.end() ? std::string() : it->second;
        };
        os << row.key << "," << field("languages") << "," << field("tau") << ","
           << fmt_value(row.base) << "," << fmt_value(row.delta_abs) << ","
           << (row.defined ? fmt_value(row.delta_pct) : "") << ","
           << (row.defined ? "true" : "false") << ",\"" << format_delta(row) << "\"\n";
    }
    return os.str();
}

void write_report_bundle(const SweepReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write_file = [&](const std::string& name, const std::string& body) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
        out << body;
    };
    write_file("cells.csv", cells_csv(report));
    write_file("deltas.csv", deltas_csv(report));
    write_file("provenance.json", report.provenance_json);

    static const char* kTauColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};

    if (report.use_case == UseCase::monolingual) {
        // one size-curve plot per language: per-tau lines, dashed baseline
        std::set<std::string> langs;
        for (const auto& [key, cell] : report.cells) {
            (void)key;
            auto it = cell.fields.find("languages");
            if (it != cell.fields.end() && !it->second.empty()) langs.insert(it->second);
        }
        for (const auto& code : langs) {
            LineChartSpec chart;
            chart.title = "ndcg@10 vs training size (" + code + ")";
            chart.x_label = "training instances";
            chart.y_label = "ndcg@10";
            std::map<int, SvgSeries> by_tau;
            double baseline = std::nan("");
            double max_size = 0.0;
            for (const auto& [key, cell] : report.cells) {
                if (!cell.ok() || cell.fields.at("languages") != code) continue;
                if (key.find("|baseline") != std::string::npos) {
                    baseline = cell.value;
                    continue;
                }
                const int tau = std::stoi(cell.fields.at("tau"));
                const double size = std::stod(cell.fields.at("size"));
                max_size = std::max(max_size, size);
                auto& s = by_tau[tau];
                s.label = "tau=" + std::to_string(tau);
                s.color = kTauColors[(tau - 1) % 3];
                s.points.emplace_back(size, cell.value);
            }
            for (auto& [tau, s] : by_tau) {
                (void)tau;
                std::sort(s.points.begin(), s.points.end());
                chart.series.push_back(std::move(s));
            }
            if (!std::isnan(baseline) && max_size > 0.0) {
                SvgSeries b;
                b.label = "baseline";
                b.color = "#555555";
                b.dashed = true;
                b.points = {{0.0, baseline}, {max_size, baseline}};
                chart.series.push_back(std::move(b));
            }
            write_file("size_curve_" + code + ".svg", render_line_chart(chart));
        }
    } else if (report.use_case == UseCase::crosslingual) {
        // query-language x corpus-language matrix of tau 1 -> 3 changes
        std::set<std::string> qlangs, clangs;
        std::map<std::pair<std::string, std::string>, double> pct;
        for (const auto& row : report.deltas) {
            if (!row.defined) continue;
            const std::string langs = row.fields.at("languages");
            const auto arrow = langs.find("->");
            const std::string q = langs.substr(0, arrow);
            const std::string c = langs.substr(arrow + 2);
            qlangs.insert(q);
            clangs.insert(c);
            pct[{q, c}] = row.delta_pct;
        }
        if (!pct.empty()) {
            HeatmapSpec hm;
            hm.title = "relative change, tau 1 -> 3 (%)";
            hm.diverging = true;
            hm.row_labels.assign(qlangs.begin(), qlangs.end());
            hm.col_labels.assign(clangs.begin(), clangs.end());
            for (const auto& q : hm.row_labels) {
                std::vector<double> row;
                for (const auto& c : hm.col_labels) {
                    auto it = pct.find({q, c});
                    row.push_back(it == pct.end() ? 0.0 : it->second);
                }
                hm.values.push_back(std::move(row));
            }
            write_file("crosslingual_delta.svg", render_heatmap(hm));
        }
    }
}

}  // namespace gradrel
