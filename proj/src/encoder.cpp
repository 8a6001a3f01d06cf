#include "gradrel/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "gradrel/rng.hpp"
#include "json.hpp"

namespace gradrel {

namespace {

constexpr char kMagic[4] = {'D', 'E', 'N', 'C'};
constexpr std::uint32_t kVersion = 1;

void add_outer(std::vector<double>& grad, const std::vector<double>& g_dense,
               const SparseVec& x, std::size_t num_buckets) {
    for (std::size_t r = 0; r < g_dense.size(); ++r) {
        const double gr = g_dense[r];
        if (gr == 0.0) continue;
        double* row = grad.data() + r * num_buckets;
        for (std::size_t k = 0; k < x.indices.size(); ++k) {
            row[x.indices[k]] += gr * x.values[k];
        }
    }
}

// gradient through z -> z/||z||: (g - (g.zhat) zhat) / ||z||
std::vector<double> through_normalization(const std::vector<double>& g,
                                          const std::vector<double>& zhat, double norm) {
    double gz = 0.0;
    for (std::size_t r = 0; r < g.size(); ++r) gz += g[r] * zhat[r];
    std::vector<double> out(g.size());
    for (std::size_t r = 0; r < g.size(); ++r) out[r] = (g[r] - gz * zhat[r]) / norm;
    return out;
}

struct Embedded {
    std::vector<double> unit;  // normalized embedding
    double norm = 0.0;         // pre-normalization norm
};

Embedded project(const EncoderParams& params, const SparseVec& x) {
    if (x.nnz() == 0) throw std::invalid_argument("embed: feature vector has no nonzeros");
    Embedded e;
    e.unit.assign(params.dim, 0.0);
    for (std::size_t k = 0; k < x.indices.size(); ++k) {
        const double v = x.values[k];
        const std::size_t col = x.indices[k];
        for (std::size_t r = 0; r < params.dim; ++r) {
            e.unit[r] += params.weights[r * params.hasher.num_buckets + col] * v;
        }
    }
    double sq = 0.0;
    for (double v : e.unit) sq += v * v;
    e.norm = std::sqrt(sq);
    if (e.norm < 1e-12) {
        throw std::runtime_error("embed: degenerate projection, ||Wx|| < 1e-12");
    }
    for (double& v : e.unit) v /= e.norm;
    return e;
}

}  // namespace

void EncoderParams::validate() const {
    hasher.validate();
    if (dim == 0) throw std::invalid_argument("encoder: dim must be > 0");
    if (!(temperature > 0.0)) throw std::invalid_argument("encoder: temperature must be > 0");
    if (weights.size() != dim * hasher.num_buckets) {
        throw std::invalid_argument("encoder: weight shape mismatch");
    }
    for (double w : weights) {
        if (!std::isfinite(w)) throw std::invalid_argument("encoder: non-finite weight");
    }
}

EncoderParams init_params(const FeatureHasher& hasher, std::size_t dim, double temperature,
                          std::uint64_t seed) {
    hasher.validate();
    EncoderParams p;
    p.hasher = hasher;
    p.dim = dim;
    p.temperature = temperature;
    p.weights.resize(dim * hasher.num_buckets);
    Rng rng(derive_seed(seed, "encoder-init"));
    const double scale = 1.0 / std::sqrt(static_cast<double>(hasher.num_buckets));
    // Box-Muller, two draws per pair
    for (std::size_t i = 0; i + 1 < p.weights.size(); i += 2) {
        const double u1 = uniform_unit(rng);
        const double u2 = uniform_unit(rng);
        const double r = std::sqrt(-2.0 * std::log(u1 > 0.0 ? u1 : 1e-300));
        p.weights[i] = scale * r * std::cos(2.0 * M_PI * u2);
        p.weights[i + 1] = scale * r * std::sin(2.0 * M_PI * u2);
    }
    if (p.weights.size() % 2 == 1) {
        const double u1 = uniform_unit(rng);
        const double u2 = uniform_unit(rng);
        p.weights.back() = scale * std::sqrt(-2.0 * std::log(u1 > 0.0 ? u1 : 1e-300)) *
                           std::cos(2.0 * M_PI * u2);
    }
    p.validate();
    return p;
}

std::vector<double> embed(const EncoderParams& params, const SparseVec& features) {
    return project(params, features).unit;
}

LossResult info_nce_loss(const EncoderParams& params, const Batch& batch) {
    const std::size_t B = batch.size();
    if (B < 2) throw std::invalid_argument("info_nce: batch needs at least 2 pairs");
    const double T = params.temperature;
    const std::size_t D = params.hasher.num_buckets;

    std::vector<Embedded> q(B), p(B);
    std::vector<std::vector<Embedded>> extras(B);
    for (std::size_t i = 0; i < B; ++i) {
        q[i] = project(params, batch[i].query);
        p[i] = project(params, batch[i].positive);
        for (const auto& neg : batch[i].extra_negatives) {
            extras[i].push_back(project(params, neg));
        }
    }

    LossResult result;
    result.gradient.assign(params.weights.size(), 0.0);
    // per-embedding gradients wrt the unit vectors, folded back at the end
    std::vector<std::vector<double>> g_q(B, std::vector<double>(params.dim, 0.0));
    std::vector<std::vector<double>> g_p(B, std::vector<double>(params.dim, 0.0));
    std::vector<std::vector<std::vector<double>>> g_extra(B);
    for (std::size_t i = 0; i < B; ++i) {
        g_extra[i].assign(extras[i].size(), std::vector<double>(params.dim, 0.0));
    }

    double total_loss = 0.0;
    for (std::size_t i = 0; i < B; ++i) {
        const std::size_t cols = B + extras[i].size();
        std::vector<double> s(cols);
        for (std::size_t j = 0; j < B; ++j) {
            double d = 0.0;
            for (std::size_t r = 0; r < params.dim; ++r) d += q[i].unit[r] * p[j].unit[r];
            s[j] = d / T;
        }
        for (std::size_t e = 0; e < extras[i].size(); ++e) {
            double d = 0.0;
            for (std::size_t r = 0; r < params.dim; ++r) d += q[i].unit[r] * extras[i][e].unit[r];
            s[B + e] = d / T;
        }
        const double smax = *std::max_element(s.begin(), s.end());
        double sum_exp = 0.0;
        for (double v : s) sum_exp += std::exp(v - smax);
        const double lse = smax + std::log(sum_exp);
        if (!std::isfinite(lse)) {
            throw std::runtime_error("info_nce: non-finite score in row " + std::to_string(i));
        }
        total_loss += lse - s[i];

        const double inv_BT = 1.0 / (static_cast<double>(B) * T);
        for (std::size_t c = 0; c < cols; ++c) {
            const double coeff = (std::exp(s[c] - lse) - (c == i ? 1.0 : 0.0)) * inv_BT;
            if (coeff == 0.0) continue;
            const std::vector<double>& cand =
                c < B ? p[c].unit : extras[i][c - B].unit;
            for (std::size_t r = 0; r < params.dim; ++r) {
                g_q[i][r] += coeff * cand[r];
            }
            std::vector<double>& sink = c < B ? g_p[c] : g_extra[i][c - B];
            for (std::size_t r = 0; r < params.dim; ++r) {
                sink[r] += coeff * q[i].unit[r];
            }
        }
    }
    result.loss = total_loss / static_cast<double>(B);
    if (!std::isfinite(result.loss)) throw std::runtime_error("info_nce: non-finite loss");

    for (std::size_t i = 0; i < B; ++i) {
        add_outer(result.gradient, through_normalization(g_q[i], q[i].unit, q[i].norm),
                  batch[i].query, D);
        add_outer(result.gradient, through_normalization(g_p[i], p[i].unit, p[i].norm),
                  batch[i].positive, D);
        for (std::size_t e = 0; e < extras[i].size(); ++e) {
            add_outer(result.gradient,
                      through_normalization(g_extra[i][e], extras[i][e].unit, extras[i][e].norm),
                      batch[i].extra_negatives[e], D);
        }
    }
    return result;
}

TrainResult train(const EncoderParams& initial, const ContrastiveSet& set,
                  const std::map<std::string, std::string>& query_texts,
                  const std::map<std::string, std::string>& passage_texts,
                  const TrainConfig& config) {
    initial.validate();
    if (config.batch_size < 2) throw std::invalid_argument("train: batch_size must be >= 2");
    if (set.positives.size() < config.batch_size) {
        throw std::invalid_argument(
            "train: " + std::to_string(set.positives.size()) + " positive pairs but batch size " +
            std::to_string(config.batch_size) +
            "; use a smaller batch size or a lower threshold");
    }

    // featurize every referenced text once
    std::map<std::string, SparseVec> qfeat, pfeat;
    auto feat_query = [&](const std::string& id) -> const SparseVec& {
        auto it = qfeat.find(id);
        if (it != qfeat.end()) return it->second;
        auto tit = query_texts.find(id);
        if (tit == query_texts.end()) throw std::invalid_argument("train: unknown query id " + id);
        return qfeat.emplace(id, initial.hasher.featurize(tit->second)).first->second;
    };
    auto feat_passage = [&](const std::string& id) -> const SparseVec& {
        auto it = pfeat.find(id);
        if (it != pfeat.end()) return it->second;
        auto tit = passage_texts.find(id);
        if (tit == passage_texts.end()) {
            throw std::invalid_argument("train: unknown passage id " + id);
        }
        return pfeat.emplace(id, initial.hasher.featurize(tit->second)).first->second;
    };

    std::map<std::string, std::vector<std::string>> negatives_by_query;
    if (config.use_labeled_negatives) {
        for (const auto& [qid, pid] : set.negatives) negatives_by_query[qid].push_back(pid);
    }

    std::vector<std::pair<std::string, std::string>> pairs = set.positives;
    std::sort(pairs.begin(), pairs.end());

    const std::size_t P = pairs.size();
    const std::size_t B = config.batch_size;
    std::size_t steps_per_epoch = P / B;
    if (P % B >= 2) ++steps_per_epoch;  // trailing partial batch still trains
    const std::size_t total_steps = steps_per_epoch * config.epochs;
    const std::size_t warmup_steps =
        static_cast<std::size_t>(std::llround(config.warmup_ratio * static_cast<double>(total_steps)));

    TrainResult result;
    result.params = initial;
    std::vector<double> velocity;
    if (config.momentum != 0.0) velocity.assign(initial.weights.size(), 0.0);

    std::size_t step = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        Rng rng(derive_seed(config.seed, "train|epoch|" + std::to_string(epoch)));
        shuffle_in_place(pairs, rng);
        for (std::size_t start = 0; start < P; start += B) {
            const std::size_t end = std::min(start + B, P);
            if (end - start < 2) break;  // a 1-pair tail has no in-batch negative
            Batch batch;
            for (std::size_t i = start; i < end; ++i) {
                BatchPair bp;
                bp.query = feat_query(pairs[i].first);
                bp.positive = feat_passage(pairs[i].second);
                auto nit = negatives_by_query.find(pairs[i].first);
                if (nit != negatives_by_query.end()) {
                    for (const auto& pid : nit->second) {
                        bp.extra_negatives.push_back(feat_passage(pid));
                    }
                }
                batch.push_back(std::move(bp));
            }
            LossResult lr = info_nce_loss(result.params, batch);

            double rate;
            if (warmup_steps > 0 && step < warmup_steps) {
                rate = config.learning_rate * static_cast<double>(step + 1) /
                       static_cast<double>(warmup_steps);
            } else if (config.decay == LrDecay::linear_to_zero && total_steps > warmup_steps) {
                rate = config.learning_rate * static_cast<double>(total_steps - step) /
                       static_cast<double>(total_steps - warmup_steps);
            } else {
                rate = config.learning_rate;
            }

            if (config.momentum != 0.0) {
                for (std::size_t w = 0; w < velocity.size(); ++w) {
                    velocity[w] = config.momentum * velocity[w] + lr.gradient[w];
                    result.params.weights[w] -= rate * velocity[w];
                }
            } else {
                for (std::size_t w = 0; w < lr.gradient.size(); ++w) {
                    result.params.weights[w] -= rate * lr.gradient[w];
                }
            }
            result.loss_trace.push_back(lr.loss);
            ++step;
        }
    }
    return result;
}

void save_checkpoint(const EncoderParams& params, const std::string& path) {
    params.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(kMagic, 4);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(kVersion);
    put_u32(static_cast<std::uint32_t>(params.dim));
    put_u32(params.hasher.num_buckets);
    put_u32(static_cast<std::uint32_t>(params.hasher.n_gram_sizes.size()));
    for (int n : params.hasher.n_gram_sizes) put_u32(static_cast<std::uint32_t>(n));
    put_u64(params.hasher.hash_seed);
    const std::uint8_t sign = params.hasher.use_sign ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&sign), 1);
    out.write(reinterpret_cast<const char*>(&params.temperature), 8);
    out.write(reinterpret_cast<const char*>(params.weights.data()),
              static_cast<std::streamsize>(params.weights.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write error in " + path);
}

EncoderParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error(path + ": not an encoder checkpoint");
    }
    auto get_u32 = [&] {
        std::uint32_t v;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_u64 = [&] {
        std::uint64_t v;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != kVersion) {
        throw std::runtime_error(path + ": unsupported checkpoint version " +
                                 std::to_string(version));
    }
    EncoderParams p;
    p.dim = get_u32();
    p.hasher.num_buckets = get_u32();
    const std::uint32_t num_sizes = get_u32();
    p.hasher.n_gram_sizes.clear();
    for (std::uint32_t i = 0; i < num_sizes; ++i) {
        p.hasher.n_gram_sizes.push_back(static_cast<int>(get_u32()));
    }
    p.hasher.hash_seed = get_u64();
    std::uint8_t sign;
    in.read(reinterpret_cast<char*>(&sign), 1);
    p.hasher.use_sign = sign != 0;
    in.read(reinterpret_cast<char*>(&p.temperature), 8);
    p.weights.resize(p.dim * p.hasher.num_buckets);
    in.read(reinterpret_cast<char*>(p.weights.data()),
            static_cast<std::streamsize>(p.weights.size() * sizeof(double)));
    if (!in) throw std::runtime_error(path + ": truncated checkpoint");
    p.validate();
    return p;
}

std::string train_config_json(const TrainConfig& config) {
    nlohmann::ordered_json j;
    j["batch_size"] = config.batch_size;
    j["epochs"] = config.epochs;
    j["learning_rate"] = config.learning_rate;
    j["warmup_ratio"] = config.warmup_ratio;
    j["lr_decay"] = config.decay == LrDecay::linear_to_zero ? "linear_to_zero"
                                                            : "constant_after_warmup";
    j["optimizer"] = config.momentum == 0.0 ? "sgd" : "sgd_momentum";
    j["momentum"] = config.momentum;
    j["use_labeled_negatives"] = config.use_labeled_negatives;
    j["seed"] = config.seed;
    return j.dump(2);
}

}  // namespace gradrel
