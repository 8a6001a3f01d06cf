#include "gradrel/agreement.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gradrel {

std::size_t AgreementMatrix::total() const {
    std::size_t n = 0;
    for (const auto& row : counts) {
        for (auto c : row) n += c;
    }
    return n;
}

AgreementMatrix AgreementMatrix::transposed() const {
    AgreementMatrix t;
    for (int i = 0; i < kNumGrades; ++i) {
        for (int j = 0; j < kNumGrades; ++j) t.counts[j][i] = counts[i][j];
    }
    return t;
}

PairingResult pair_annotations(const std::vector<GradedInstance>& instances_a,
                               const std::vector<GradedInstance>& instances_b) {
    std::map<std::pair<std::string, std::string>, int> scores_b;
    for (const auto& gi : instances_b) {
        scores_b[{gi.query_id, gi.passage_id}] = gi.score.value();
    }
    PairingResult result;
    std::map<std::pair<std::string, std::string>, bool> matched_b;
    for (const auto& gi : instances_a) {
        auto key = std::make_pair(gi.query_id, gi.passage_id);
        auto it = scores_b.find(key);
        if (it == scores_b.end()) {
            result.unmatched_a.push_back(gi.query_id + "/" + gi.passage_id);
            continue;
        }
        matched_b[key] = true;
        result.matrix.counts[gi.score.value()][it->second] += 1;
    }
    for (const auto& [key, score] : scores_b) {
        (void)score;
        if (matched_b.find(key) == matched_b.end()) {
            result.unmatched_b.push_back(key.first + "/" + key.second);
        }
    }
    if (result.matrix.total() == 0) {
        throw std::invalid_argument("pair_annotations: no overlapping (query, passage) keys");
    }
    return result;
}

RowNormalized row_normalize(const AgreementMatrix& m) {
    RowNormalized rn;
    for (int i = 0; i < kNumGrades; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < kNumGrades; ++j) row_sum += static_cast<double>(m.counts[i][j]);
        if (row_sum == 0.0) {
            rn.zero_rows[i] = true;
            continue;
        }
        for (int j = 0; j < kNumGrades; ++j) {
            rn.proportions[i][j] = static_cast<double>(m.counts[i][j]) / row_sum;
        }
    }
    return rn;
}

double quadratic_weighted_kappa(const AgreementMatrix& m) {
    const double n = static_cast<double>(m.total());
    if (n < 1.0) throw std::invalid_argument("kappa: empty matrix");

    std::array<double, kNumGrades> marg_a{}, marg_b{};
    double observed = 0.0;
    for (int i = 0; i < kNumGrades; ++i) {
        for (int j = 0; j < kNumGrades; ++j) {
            const double o = static_cast<double>(m.counts[i][j]) / n;
            const double w = static_cast<double>((i - j) * (i - j)) /
                             static_cast<double>((kNumGrades - 1) * (kNumGrades - 1));
            observed += w * o;
            marg_a[i] += o;
            marg_b[j] += o;
        }
    }
    double expected = 0.0;
    for (int i = 0; i < kNumGrades; ++i) {
        for (int j = 0; j < kNumGrades; ++j) {
            const double w = static_cast<double>((i - j) * (i - j)) /
                             static_cast<double>((kNumGrades - 1) * (kNumGrades - 1));
            expected += w * marg_a[i] * marg_b[j];
        }
    }
    if (expected == 0.0) {
        // Both marginals concentrated on one category. With all observed mass
        // on that diagonal cell the annotators agree perfectly.
        if (observed == 0.0) return 1.0;
        throw std::domain_error(
            "kappa undefined: expected weighted disagreement is zero (both annotators "
            "constant) while observed disagreement is not");
    }
    return 1.0 - observed / expected;
}

std::string heatmap_csv(const RowNormalized& rn) {
    std::ostringstream os;
    for (int i = 0; i < kNumGrades; ++i) {
        for (int j = 0; j < kNumGrades; ++j) {
            if (j > 0) os << ",";
            os << rn.proportions[i][j];
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace gradrel
