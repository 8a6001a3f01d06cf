#pragma once
// Trainable dual encoder: linear projection of hashed n-gram features to
// unit-norm embeddings, cosine scoring, and the InfoNCE objective with
// analytically derived gradients. 64-bit floats throughout.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gradrel/binarize.hpp"
#include "gradrel/hashing.hpp"

namespace gradrel {

struct EncoderParams {
    FeatureHasher hasher;
    std::size_t dim = 64;        // embedding dimension d
    double temperature = 0.05;   // InfoNCE temperature
    std::vector<double> weights; // row-major dim x num_buckets

    double& at(std::size_t row, std::size_t col) { return weights[row * hasher.num_buckets + col]; }
    double at(std::size_t row, std::size_t col) const {
        return weights[row * hasher.num_buckets + col];
    }
    void validate() const;
};

// Gaussian init scaled by 1/sqrt(num_buckets), deterministic in seed.
EncoderParams init_params(const FeatureHasher& hasher, std::size_t dim, double temperature,
                          std::uint64_t seed);

// W x / ||W x||. Throws on empty features or a degenerate (< 1e-12) norm.
std::vector<double> embed(const EncoderParams& params, const SparseVec& features);

struct BatchPair {
    SparseVec query;
    SparseVec positive;
    std::vector<SparseVec> extra_negatives;  // labeled negatives for this query
};
using Batch = std::vector<BatchPair>;  // B >= 2

struct LossResult {
    double loss = 0.0;
    std::vector<double> gradient;  // same shape as weights
};

// loss = -(1/B) sum_i log( exp(s_ii) / sum_j exp(s_ij) ), s in cosine/T.
// Row i ranges over all in-batch positives plus i's extra negatives.
LossResult info_nce_loss(const EncoderParams& params, const Batch& batch);

enum class LrDecay { linear_to_zero, constant_after_warmup };

struct TrainConfig {
    std::size_t batch_size = 32;
    std::size_t epochs = 2;
    double learning_rate = 1e-6;   // initial LR after warm-up
    double warmup_ratio = 0.05;    // fraction of steps ramping 0 -> LR
    LrDecay decay = LrDecay::linear_to_zero;
    double momentum = 0.0;         // 0 = plain SGD
    bool use_labeled_negatives = true;
    std::uint64_t seed = 0;
};

struct TrainResult {
    EncoderParams params;
    std::vector<double> loss_trace;  // one entry per optimizer step
};

// Epochs over seeded-shuffled positive pairs; texts looked up by id.
// Throws when fewer positives than one batch are available.
TrainResult train(const EncoderParams& initial, const ContrastiveSet& set,
                  const std::map<std::string, std::string>& query_texts,
                  const std::map<std::string, std::string>& passage_texts,
                  const TrainConfig& config);

// Binary checkpoint: magic, version, shapes, hasher settings, temperature,
// row-major weights.
void save_checkpoint(const EncoderParams& params, const std::string& path);
EncoderParams load_checkpoint(const std::string& path);

std::string train_config_json(const TrainConfig& config);

}  // namespace gradrel
