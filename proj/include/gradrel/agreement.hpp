#pragma once
// Annotator consistency: pairwise confusion counts, row-normalized heatmap
// data, and quadratic weighted kappa.

#include <array>
#include <string>
#include <vector>

#include "gradrel/core.hpp"

namespace gradrel {

struct AgreementMatrix {
    // counts[i][j]: scored i by annotator A, j by annotator B
    std::array<std::array<std::size_t, kNumGrades>, kNumGrades> counts{};

    std::size_t total() const;
    AgreementMatrix transposed() const;
};

struct PairingResult {
    AgreementMatrix matrix;
    std::vector<std::string> unmatched_a;  // keys only in A
    std::vector<std::string> unmatched_b;  // keys only in B
};

// Matches the two collections on (query_id, passage_id). Throws if no keys
// overlap.
PairingResult pair_annotations(const std::vector<GradedInstance>& instances_a,
                               const std::vector<GradedInstance>& instances_b);

struct RowNormalized {
    std::array<std::array<double, kNumGrades>, kNumGrades> proportions{};
    std::array<bool, kNumGrades> zero_rows{};  // flagged, left all-zero
};

RowNormalized row_normalize(const AgreementMatrix& m);

// kappa = 1 - sum(w*O) / sum(w*E), w_ij = (i-j)^2 / 9, E from empirical
// marginals. Degenerate marginals with all observed mass on one diagonal cell
// yield 1.0; any other zero-denominator case throws.
double quadratic_weighted_kappa(const AgreementMatrix& m);

// 4x4 proportions as CSV, for heatmap rendering.
std::string heatmap_csv(const RowNormalized& rn);

}  // namespace gradrel
