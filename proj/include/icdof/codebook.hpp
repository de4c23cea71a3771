#pragma once

#include "icdof/channel.hpp"
#include "icdof/exact_scalar.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace icdof {

/// Exponent vector over the off-diagonal channel variables, in the frozen
/// row-major order of ChannelMatrix::offdiag_vector.
struct Monomial {
    std::vector<std::uint32_t> exponents;

    std::uint32_t degree() const {
        std::uint32_t sum = 0;
        for (auto e : exponents) sum += e;
        return sum;
    }

    ExactScalar evaluate(const std::vector<ExactScalar>& vars) const;

    bool operator==(const Monomial& o) const { return exponents == o.exponents; }
    /// Graded order, ties broken lexicographically.
    bool operator<(const Monomial& o) const;
};

/// Number of monomials of degree <= d in the K(K-1) off-diagonal
/// variables: binom(K(K-1)+d, d).
Int monomial_count(int K, int d);

/// All monomials of degree <= d, graded then lexicographic; the constant
/// monomial comes first.
std::vector<Monomial> enumerate_monomials(int K, int d);

/// Integer-coefficient polynomial in the off-diagonal variables.
class IntPolynomial {
public:
    IntPolynomial() = default;

    /// Adds coeff * monomial; zero coefficients are dropped.
    void add_term(const Monomial& m, const Int& coeff);

    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    Int max_abs_coeff() const;
    ExactScalar evaluate(const std::vector<ExactScalar>& vars) const;
    const std::map<Monomial, Int>& terms() const { return terms_; }
    std::string str() const;

    IntPolynomial operator-(const IntPolynomial& o) const;

private:
    std::map<Monomial, Int> terms_;
};

/// The value-collapsed set W_{N,d}: all sums of coefficients in {0..N-1}
/// times the monomials of degree <= d, evaluated at the off-diagonal
/// entries and deduplicated by exact equality.
///
/// Storage is one of two forms. When every monomial evaluates to 0 or 1
/// the set is exactly the integer range {0..(N-1)*U} (U the number of
/// unit monomials) and is kept implicitly. Otherwise values are stored
/// explicitly in deterministic insertion order, each with a back-pointer
/// chain from which a witness coefficient vector is reconstructed.
class CodebookSet {
public:
    std::uint64_t coeff_bound = 1; // N
    int degree_bound = 0;          // d
    std::vector<ExactScalar> monomial_values;

    Int cardinality() const;
    bool is_range() const { return range_; }
    const Int& range_max() const { return range_max_; }

    bool contains(const ExactScalar& v) const;

    /// One coefficient vector a with value = sum a_i f_i and a_i < N.
    /// Throws if the value is not in the set.
    std::vector<std::uint64_t> witness(const ExactScalar& v) const;

    ExactScalar evaluate_witness(const std::vector<std::uint64_t>& coeffs) const;

    /// Materializes the values (insertion order for explicit sets,
    /// ascending for range sets). Throws ResourceLimitError above limit.
    std::vector<ExactScalar> values(std::uint64_t limit = UINT64_MAX) const;

private:
    friend CodebookSet build_codebook(const ChannelMatrix&, std::uint64_t, int, std::uint64_t);

    struct Entry {
        ExactScalar value;
        std::uint32_t prev = 0;
        std::int32_t step = -1;    // monomial index that created the entry
        std::uint32_t coeff = 0;   // its coefficient
    };

    bool range_ = false;
    Int range_max_ = 0;
    std::uint64_t unit_monomials_ = 0;
    std::vector<Entry> entries_;
    std::unordered_map<ExactScalar, std::uint32_t> index_;
};

/// Builds W_{N,d} for the given matrix. Throws ResourceLimitError carrying
/// the cap when the collapsed value count would exceed it.
CodebookSet build_codebook(const ChannelMatrix& H, std::uint64_t N, int d, std::uint64_t cap);

/// Value set of the signed coefficient box {-c..c} over the monomials of
/// degree <= d. As a set this equals W_{c+1,d} - W_{c+1,d}, which is what
/// collision detection and polynomial-witness search quantify over. Keeps
/// the same two storage forms as CodebookSet.
class DifferenceSet {
public:
    std::uint64_t coeff_bound = 0; // c
    int degree_bound = 0;
    std::vector<ExactScalar> monomial_values;

    Int cardinality() const;
    bool is_range() const { return range_; }
    const Int& range_max() const { return range_max_; }

    bool contains(const ExactScalar& v) const;

    /// Signed coefficient vector with value = sum c_i f_i, |c_i| <= c, not
    /// all zero unless the value is zero.
    std::vector<std::int64_t> witness(const ExactScalar& v) const;

    ExactScalar evaluate_witness(const std::vector<std::int64_t>& coeffs) const;

    /// Invokes fn on every value in deterministic order. Only valid for
    /// explicit sets; range sets answer queries without iteration.
    template <typename Fn>
    void for_each_value(Fn&& fn) const {
        for (const auto& e : entries_) fn(e.value);
    }

private:
    friend DifferenceSet build_difference_set(std::vector<ExactScalar>, std::uint64_t, int,
                                              std::uint64_t);

    struct Entry {
        ExactScalar value;
        std::uint32_t prev = 0;
        std::int32_t step = -1;
        std::int64_t coeff = 0;
    };

    bool range_ = false;
    Int range_max_ = 0;
    std::vector<Entry> entries_;
    std::unordered_map<ExactScalar, std::uint32_t> index_;
};

DifferenceSet build_difference_set(const ChannelMatrix& H, std::uint64_t c, int d,
                                   std::uint64_t cap);

/// Same, over pre-evaluated monomial values in the frozen order.
DifferenceSet build_difference_set(std::vector<ExactScalar> monomial_values, std::uint64_t c,
                                   int d, std::uint64_t cap);

/// |W_{N,d}| without materializing when a closed form applies (all
/// off-diagonal entries 0/1, or d = 0). N may exceed 64 bits here.
Int codebook_cardinality(const ChannelMatrix& H, const Int& N, int d, std::uint64_t cap);

struct RatioPoint {
    int d;
    Int cardinality;      // |W_{N^d, d}|
    Int cardinality_next; // |W_{N^(d+1), d+1}|
    double log_ratio;     // log |W_next| / log |W|
};

struct RatioSeries {
    std::vector<RatioPoint> points;
    bool truncated = false;
    std::string truncation_note;
};

/// The alignment-cardinality series log|W_{N^(d+1),d+1}| / log|W_{N^d,d}|
/// for d = 1..d_max. Requires N > 1. A cap hit truncates the series and
/// sets the marker instead of failing.
RatioSeries cardinality_ratio_series(const ChannelMatrix& H, std::uint64_t N, int d_max,
                                     std::uint64_t cap);

} // namespace icdof
