#pragma once

#include "icdof/channel.hpp"
#include "icdof/codebook.hpp"
#include "icdof/distribution.hpp"

#include <string>
#include <vector>

namespace icdof {

/// Description of a self-similar input X = sum_k r^k Psi_k with i.i.d.
/// digits. Never sampled; every number the engine produces comes from the
/// single-letter digit distribution.
struct SelfSimilarCode {
    DiscreteDistribution base; // digit distribution Psi
    Rational ratio;            // r in (0,1)
    std::string description;

    SelfSimilarCode(DiscreteDistribution base_, Rational ratio_);
};

/// Per-user lower bound min{H(full)/log(1/r), 1} - min{H(intf)/log(1/r), 1}
/// where full/intf are the receive and interference sums of independent
/// digit distributions. r must lie in (0,1).
std::vector<double> dof_lower_bound(const ChannelMatrix& H,
                                    const std::vector<DiscreteDistribution>& dists,
                                    const Rational& r, std::uint64_t cap);

struct SeparabilityCheck {
    bool additive = false; // receive support factors exactly
    double gap_bits = 0.0; // H(signal) + H(interference) - H(sum)
};

/// Signal/interference separability at receiver i: additive iff the
/// support of h_ii*Psi_i + sum_{j != i} h_ij*Psi_j has exactly
/// |signal support| * |interference support| atoms (exact count), which
/// forces the entropy identity for independent inputs.
SeparabilityCheck separability_check(const ChannelMatrix& H, int i,
                                     const std::vector<DiscreteDistribution>& dists,
                                     std::uint64_t cap);

/// Digit distributions compensating a channel scaling: dists'[i] has
/// support scaled by 1/col_factor_i, so the receive entropies (and the
/// per-user bounds) of the scaled matrix match the original exactly.
std::vector<DiscreteDistribution> scaled_input_compensation(
    const ScalingPair& s, const std::vector<DiscreteDistribution>& dists);

struct PipelineRow {
    int d = 0;
    Int cardinality;                  // |W_{N^d, d}|
    std::vector<double> user_bounds;  // per user; NaN when truncated
    std::vector<bool> user_truncated;
    std::vector<bool> separable;
    std::vector<double> separability_gap;
    double summing_bound = 0.0; // 1 - log|W_next| / (2 log|W|)
    bool summing_truncated = false;
};

struct PipelineResult {
    std::uint64_t N = 0;
    int d_max = 0;
    std::uint64_t cap = 0;
    std::vector<PipelineRow> rows;
    bool truncated = false;
    std::string note;
};

/// The d-sweep: for d = 1..d_max build W_{N^d,d}, take the digits uniform
/// on it with r = |W|^-2, and record the per-user bound, the cardinality
/// lower bound, and the separability flags. Requires N > K-1. Matrices
/// with 0/1 off-diagonals use closed forms (range codebooks, uniform-sum
/// entropies) and avoid materializing anything; caps mark truncated
/// entries instead of failing the sweep.
PipelineResult sufficiency_pipeline(const ChannelMatrix& H, std::uint64_t N, int d_max,
                                    std::uint64_t cap);

} // namespace icdof
