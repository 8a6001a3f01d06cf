#include "gradrel/sampling.hpp"

#include <algorithm>
#include <sstream>

#include "gradrel/rng.hpp"
#include "json.hpp"

namespace gradrel {

namespace {

bool instance_less(const GradedInstance& a, const GradedInstance& b) {
    if (a.query_id != b.query_id) return a.query_id < b.query_id;
    if (a.passage_id != b.passage_id) return a.passage_id < b.passage_id;
    return a.annotator_id < b.annotator_id;
}

std::map<std::string, std::vector<GradedInstance>> group_by_language(
    const std::vector<GradedInstance>& instances) {
    std::map<std::string, std::vector<GradedInstance>> groups;
    for (const auto& gi : instances) groups[gi.language.code].push_back(gi);
    for (auto& [code, v] : groups) {
        (void)code;
        std::sort(v.begin(), v.end(), instance_less);
    }
    return groups;
}

std::vector<GradedInstance> take_uniform(const std::vector<GradedInstance>& pool,
                                         std::size_t count, Rng& rng) {
    auto idx = sample_indices(pool.size(), count, rng);
    std::sort(idx.begin(), idx.end());
    std::vector<GradedInstance> out;
    out.reserve(count);
    for (auto i : idx) out.push_back(pool[i]);
    return out;
}

}  // namespace

std::map<std::string, std::map<int, std::size_t>> count_by_language_and_score(
    const std::vector<GradedInstance>& instances) {
    std::map<std::string, std::map<int, std::size_t>> counts;
    for (const auto& gi : instances) counts[gi.language.code][gi.score.value()] += 1;
    return counts;
}

SampledSplit distribution_matched_downsample(const std::vector<GradedInstance>& instances,
                                             std::size_t target_total, std::uint64_t seed) {
    auto groups = group_by_language(instances);
    if (groups.empty()) throw std::invalid_argument("downsample: no instances");

    // step 1: smallest non-zero-score count over languages
    std::size_t m = SIZE_MAX;
    for (const auto& [code, group] : groups) {
        std::size_t nonzero = 0;
        for (const auto& gi : group) nonzero += gi.score.value() > 0 ? 1 : 0;
        if (nonzero == 0) {
            throw std::invalid_argument("downsample: language '" + code +
                                        "' has no non-zero-score instances");
        }
        m = std::min(m, nonzero);
    }
    if (m > target_total) {
        throw std::invalid_argument("downsample: target_total " + std::to_string(target_total) +
                                    " below the minimum non-zero count " + std::to_string(m));
    }

    SampledSplit split;
    split.target_total = target_total;
    for (const auto& [code, group] : groups) {
        std::vector<GradedInstance> nonzero, zero;
        for (const auto& gi : group) (gi.score.value() > 0 ? nonzero : zero).push_back(gi);

        const std::size_t fill = target_total - m;
        if (zero.size() < fill) {
            throw std::invalid_argument("downsample: language '" + code + "' has only " +
                                        std::to_string(zero.size()) +
                                        " zero-score instances, needs " + std::to_string(fill) +
                                        " (short by " + std::to_string(fill - zero.size()) + ")");
        }
        // steps 2 and 3, each with its own language-scoped stream
        Rng rng_nz(derive_seed(seed, "downsample|nonzero|" + code));
        Rng rng_z(derive_seed(seed, "downsample|zero|" + code));
        auto picked = take_uniform(nonzero, m, rng_nz);
        auto zeros = take_uniform(zero, fill, rng_z);
        split.instances.insert(split.instances.end(), picked.begin(), picked.end());
        split.instances.insert(split.instances.end(), zeros.begin(), zeros.end());
    }
    split.per_language_counts = count_by_language_and_score(split.instances);
    return split;
}

std::vector<GradedInstance> build_mixture(const std::vector<GradedInstance>& instances,
                                          const MixtureSpec& spec) {
    if (spec.target_count == 0) throw std::invalid_argument("mixture: target_count must be > 0");
    auto groups = group_by_language(instances);

    auto subsample = [&](const LanguageTag& lang, std::size_t count,
                         const std::string& role) -> std::vector<GradedInstance> {
        auto it = groups.find(lang.code);
        const std::size_t have = it == groups.end() ? 0 : it->second.size();
        if (have < count) {
            throw std::invalid_argument("mixture: language '" + lang.code + "' (" + role +
                                        ") has " + std::to_string(have) + " instances, needs " +
                                        std::to_string(count) + " (short by " +
                                        std::to_string(count - have) + ")");
        }
        Rng rng(derive_seed(spec.seed, "mixture|" + role + "|" + lang.code));
        return take_uniform(it->second, count, rng);
    };

    std::vector<GradedInstance> out = subsample(spec.target_language, spec.target_count, "target");
    if (spec.additional_language) {
        auto extra = subsample(*spec.additional_language, spec.additional_count, "additional");
        out.insert(out.end(), extra.begin(), extra.end());
        Rng rng(derive_seed(spec.seed, "mixture|shuffle"));
        shuffle_in_place(out, rng);
    }
    return out;
}

std::vector<std::vector<GradedInstance>> size_ladder(const std::vector<GradedInstance>& split,
                                                     const std::vector<std::size_t>& sizes,
                                                     std::uint64_t seed,
                                                     bool independent_resampling) {
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) {
            throw std::invalid_argument("size ladder: sizes must be strictly increasing");
        }
    }
    if (!sizes.empty() && sizes.back() > split.size()) {
        throw std::invalid_argument("size ladder: max size " + std::to_string(sizes.back()) +
                                    " exceeds split size " + std::to_string(split.size()));
    }
    std::vector<GradedInstance> pool = split;
    std::sort(pool.begin(), pool.end(), instance_less);

    std::vector<std::vector<GradedInstance>> out;
    if (independent_resampling) {
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            Rng rng(derive_seed(seed, "ladder|independent|" + std::to_string(i)));
            out.push_back(take_uniform(pool, sizes[i], rng));
        }
    } else {
        Rng rng(derive_seed(seed, "ladder|nested"));
        shuffle_in_place(pool, rng);
        for (auto size : sizes) {
            out.emplace_back(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
        }
    }
    return out;
}

std::string sampling_manifest_json(const std::vector<GradedInstance>& before,
                                   const SampledSplit& after, std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["target_total"] = after.target_total;
    auto counts_json = [](const std::map<std::string, std::map<int, std::size_t>>& counts) {
        nlohmann::ordered_json out;
        for (const auto& [code, by_score] : counts) {
            nlohmann::ordered_json scores;
            for (const auto& [score, n] : by_score) scores[std::to_string(score)] = n;
            out[code] = scores;
        }
        return out;
    };
    j["before"] = counts_json(count_by_language_and_score(before));
    j["after"] = counts_json(after.per_language_counts);
    return j.dump(2);
}

}  // namespace gradrel
