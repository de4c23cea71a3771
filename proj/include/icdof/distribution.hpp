#pragma once

#include "icdof/exact_scalar.hpp"

#include <cstdint>
#include <vector>

namespace icdof {

/// Finitely supported distribution with ExactScalar support points and
/// exact rational probabilities. Atoms are kept sorted by the exact value
/// order, pairwise distinct, with positive probabilities summing to one.
class DiscreteDistribution {
public:
    struct Atom {
        ExactScalar value;
        Rational prob;
    };

    /// Validates and canonicalizes (sorts, merges duplicate values).
    static DiscreteDistribution from_atoms(std::vector<Atom> atoms);

    /// Uniform over a set of values (deduplicated exactly).
    static DiscreteDistribution uniform(const std::vector<ExactScalar>& values);

    /// Uniform over {0, 1, ..., n-1}.
    static DiscreteDistribution uniform_range(std::uint64_t n);

    static DiscreteDistribution degenerate(ExactScalar value);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool is_degenerate() const { return atoms_.size() == 1; }

    /// Distribution of a*X (bijective on the support for a != 0);
    /// a = 0 collapses to the point mass at 0.
    DiscreteDistribution scaled(const ExactScalar& a) const;

private:
    std::vector<Atom> atoms_;
};

/// Exact distribution of sum_j coeffs[j] * X_j for independent X_j, via
/// sequential convolution with exact value collapse. The intermediate
/// atom count is capped; exceeding the cap raises ResourceLimitError.
DiscreteDistribution dist_lincomb(const std::vector<ExactScalar>& coeffs,
                                  const std::vector<DiscreteDistribution>& dists,
                                  std::uint64_t cap);

/// Shannon entropy in bits, computed in double precision from the exact
/// probabilities, summing in the canonical (sorted-support) order.
double entropy_bits(const DiscreteDistribution& d);

/// floor(2^m x) / 2^m with floor toward minus infinity.
Rational quantize(const ExactScalar& x, int m);
Rational quantize(double x, int m);

/// Entropy in bits of the sum of m independent uniforms on {0..n-1},
/// evaluated from the exact counting formula without materializing a
/// distribution. Supports m = 0 (degenerate) through small m; the loop
/// length is m*(n-1)+1 and is capped.
double uniform_sum_entropy_bits(int m, const Int& n, std::uint64_t cap);

} // namespace icdof
