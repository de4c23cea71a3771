#pragma once

#include "icdof/numeric.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icdof {

/// Element of the rationals extended by square roots of square-free
/// integers, e.g. 3/2 + sqrt(2) - 5*sqrt(6).
///
/// Representation: a sorted term list (radicand, coefficient) where every
/// radicand is a square-free positive integer and radicand 1 holds the
/// rational part. Zero coefficients are never stored, so equality of the
/// canonical form is plain structural equality. Values are immutable and
/// all operations are pure; instances can be shared freely across threads.
class ExactScalar {
public:
    using Term = std::pair<std::uint64_t, Rational>;

    ExactScalar() = default; // zero
    ExactScalar(int v) : ExactScalar(Rational(v)) {}
    ExactScalar(long long v) : ExactScalar(Rational(v)) {}
    ExactScalar(const Int& v) : ExactScalar(Rational(v)) {}
    ExactScalar(Rational v) {
        if (v != 0) terms_.emplace_back(1, std::move(v));
        refresh_approx();
    }

    /// sqrt(n) reduced to c*sqrt(m) with m square-free, by trial division.
    /// Intended for small radicands (channel constants); throws for n
    /// whose square-free part cannot be factored with 64-bit trial division.
    static ExactScalar sqrt_of(std::uint64_t n);

    /// Builds c * sqrt(r); r must already be square-free.
    static ExactScalar radical(Rational coeff, std::uint64_t radicand);

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1);
    }
    /// The exact rational value, if the scalar is rational.
    std::optional<Rational> rational_value() const {
        if (terms_.empty()) return Rational(0);
        if (terms_.size() == 1 && terms_[0].first == 1) return terms_[0].second;
        return std::nullopt;
    }

    const std::vector<Term>& terms() const { return terms_; }

    ExactScalar operator-() const;
    ExactScalar operator+(const ExactScalar& o) const;
    ExactScalar operator-(const ExactScalar& o) const;
    ExactScalar operator*(const ExactScalar& o) const;
    /// Exact division; throws std::domain_error on zero divisor.
    ExactScalar operator/(const ExactScalar& o) const;
    ExactScalar inverse() const;

    bool operator==(const ExactScalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    /// Exact sign. A cached double evaluation decides when it clears its
    /// error margin; ties fall back to exact recursive descent over the
    /// radical tower (comparing A^2 against p*B^2 for x = A + B*sqrt(p)),
    /// so the induced order is total and equality decisions are exact.
    int sign() const;
    /// Three-way comparison: decided by the cached approximations when
    /// they are separated beyond the rounding margin, exactly otherwise.
    int compare(const ExactScalar& o) const;
    bool operator<(const ExactScalar& o) const { return compare(o) < 0; }
    bool operator<=(const ExactScalar& o) const { return compare(o) <= 0; }
    bool operator>(const ExactScalar& o) const { return compare(o) > 0; }
    bool operator>=(const ExactScalar& o) const { return compare(o) >= 0; }

    /// Double approximation, evaluated in 50-digit intermediate precision.
    double to_double() const;

    /// Largest integer not exceeding the value.
    Int floor() const;

    std::size_t hash() const;

    /// Canonical text form, e.g. "3/2 - sqrt(2) + 5*sqrt(6)"; parses back
    /// exactly via parse_scalar.
    std::string str() const;

private:
    static ExactScalar from_terms(std::vector<Term> terms);
    static int sign_of_terms(const std::vector<Term>& terms);
    void refresh_approx();

    std::vector<Term> terms_;
    // Fast-path state for sign/comparison: a double evaluation and the
    // magnitude sum that scales its rounding error.
    double approx_ = 0.0;
    double magnitude_ = 0.0;
};

inline ExactScalar operator*(const Rational& a, const ExactScalar& b) {
    return ExactScalar(a) * b;
}

/// Radicands admitted by the scalar parser, kept as the set of primes
/// appearing in the configured square-free radicands (default {2,3,5}).
class RadicandSet {
public:
    RadicandSet() : RadicandSet({2, 3, 5}) {}
    explicit RadicandSet(const std::vector<std::uint64_t>& radicands);

    bool admits(std::uint64_t prime) const { return primes_.count(prime) > 0; }
    const std::set<std::uint64_t>& primes() const { return primes_; }

private:
    std::set<std::uint64_t> primes_;
};

/// Parses the config-file syntax: signed rational literals and terms like
/// "3/2*sqrt(2)" joined with '+'/'-'. Both ASCII '-' and U+2212 are
/// accepted. Radicands must stay within the configured set; otherwise an
/// UnsupportedFieldError is thrown. Round-trips ExactScalar::str exactly.
ExactScalar parse_scalar(std::string_view text, const RadicandSet& field = RadicandSet());

} // namespace icdof

template <>
struct std::hash<icdof::ExactScalar> {
    std::size_t operator()(const icdof::ExactScalar& s) const { return s.hash(); }
};
