#pragma once

#include "icdof/exact_scalar.hpp"

#include <string>
#include <utility>
#include <vector>

namespace icdof {

/// K-user interference channel matrix over ExactScalar entries.
/// Entry (i,j) couples transmitter j to receiver i; indices are 0-based
/// internally and 1-based in every report.
class ChannelMatrix {
public:
    ChannelMatrix(int K, std::vector<ExactScalar> entries);

    int users() const { return K_; }
    const ExactScalar& at(int i, int j) const { return entries_[i * K_ + j]; }
    const std::vector<ExactScalar>& entries() const { return entries_; }

    bool is_fully_connected() const;

    /// Zero-set of the matrix: off-diagonal (i,j) positions with h_ij = 0.
    std::vector<std::pair<int, int>> zero_offdiagonals() const;

    /// Off-diagonal vector in the frozen order: row-major, skipping the
    /// diagonal. Monomial variable indexing depends on this order.
    std::vector<ExactScalar> offdiag_vector() const;

    /// Maps an off-diagonal position (i,j) to its index in offdiag_vector.
    int offdiag_index(int i, int j) const;

    /// Applies the user relabeling perm (new index -> old index) to both
    /// rows and columns.
    ChannelMatrix relabeled(const std::vector<int>& perm) const;

private:
    int K_;
    std::vector<ExactScalar> entries_;
};

/// Row/column scaling factors, all nonzero.
struct ScalingPair {
    std::vector<ExactScalar> row;
    std::vector<ExactScalar> col;

    static ScalingPair identity(int K);
    /// Componentwise factor products: applying the result equals applying
    /// first then second.
    ScalingPair compose(const ScalingPair& then) const;
};

struct Violation {
    enum class Kind { user_count, zero_diagonal };
    Kind kind;
    int index; // offending user (1-based) for zero_diagonal, else 0
    std::string message;
};

/// Structural checks: K >= 3 and all diagonal entries nonzero.
std::vector<Violation> validate(const ChannelMatrix& H);

/// Entry-wise scaling: out(i,j) = row_i * h_ij * col_j. Preserves the
/// zero-set. Throws on zero factors.
ChannelMatrix scale(const ChannelMatrix& H, const ScalingPair& s);

/// Scales a fully connected matrix into the normal form with ones across
/// the last row and last column (off-diagonal) and at entry (2,1).
/// Returns the result together with the factors that produce it.
std::pair<ChannelMatrix, ScalingPair> canonical_scale(const ChannelMatrix& H);

/// h_ii * h_kj / (h_ij * h_ki) for distinct users i, j, k (0-based).
/// Invariant under scaling. Throws naming the vanishing link if a
/// denominator entry is zero.
ExactScalar cross_ratio(const ChannelMatrix& H, int i, int j, int k);

struct DofAccounting {
    int disconnected_count = 0;            // users with no off-diagonal links
    std::vector<int> disconnected_users;   // 0-based
    Rational total_dof_if_half_each;       // L + (K-L)/2
};

DofAccounting dof_accounting(const ChannelMatrix& H);

} // namespace icdof
