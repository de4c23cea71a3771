#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace icdof {

// Arbitrary-precision substrate. Rationals are kept normalized (lowest
// terms, positive denominator) by the backend.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

/// Thrown when a configured resource cap (value-set size, pair scan,
/// convolution width) would be exceeded. Carries the cap that was hit.
class ResourceLimitError : public std::runtime_error {
public:
    ResourceLimitError(std::string what_limit, std::uint64_t limit)
        : std::runtime_error("resource limit exceeded: " + what_limit +
                             " (cap " + std::to_string(limit) + ")"),
          limit_name(std::move(what_limit)),
          limit_value(limit) {}

    std::string limit_name;
    std::uint64_t limit_value;
};

/// Thrown when a scalar would leave the configured radical field.
class UnsupportedFieldError : public std::domain_error {
    using std::domain_error::domain_error;
};

inline Int binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result *= Int(n - k + i);
        result /= Int(i);
    }
    return result;
}

inline Int ipow(Int base, std::uint64_t exp) {
    Int result = 1;
    while (exp > 0) {
        if (exp & 1) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

inline double to_double(const Rational& r) {
    double num = numerator(r).convert_to<double>();
    double den = denominator(r).convert_to<double>();
    if (std::isfinite(num) && std::isfinite(den) && den != 0) return num / den;
    // Huge components: divide in wide precision to dodge the overflow.
    BigFloat wide_num(numerator(r));
    BigFloat wide_den(denominator(r));
    return static_cast<double>(wide_num / wide_den);
}

inline double log2_int(const Int& n) {
    if (n <= 0) throw std::domain_error("log2_int: nonpositive argument");
    BigFloat f(n);
    return static_cast<double>(boost::multiprecision::log2(f));
}

inline double log2_rational(const Rational& r) {
    if (r <= 0) throw std::domain_error("log2_rational: nonpositive argument");
    return log2_int(numerator(r)) - log2_int(denominator(r));
}

} // namespace icdof
