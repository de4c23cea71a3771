#include "icdof/exact_scalar.hpp"

#include <boost/functional/hash.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>

namespace icdof {

namespace {

// Factors a square-free radicand into primes. Radicands originate from
// sqrt_of, so they are small products of small primes.
std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 wide = static_cast<unsigned __int128>(a) * b;
    if (wide > UINT64_MAX) throw std::overflow_error("radicand product overflows");
    return static_cast<std::uint64_t>(wide);
}

} // namespace

ExactScalar ExactScalar::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    std::vector<Term> merged;
    for (auto& t : terms) {
        if (!merged.empty() && merged.back().first == t.first) {
            merged.back().second += t.second;
            if (merged.back().second == 0) merged.pop_back();
        } else if (t.second != 0) {
            merged.push_back(std::move(t));
        }
    }
    ExactScalar s;
    s.terms_ = std::move(merged);
    s.refresh_approx();
    return s;
}

void ExactScalar::refresh_approx() {
    double acc = 0.0, mag = 0.0;
    for (const auto& [r, c] : terms_) {
        double num = numerator(c).convert_to<double>();
        double den = denominator(c).convert_to<double>();
        double t = (num / den) * std::sqrt(static_cast<double>(r));
        acc += t;
        mag += std::abs(t);
    }
    approx_ = acc;
    magnitude_ = mag;
}

ExactScalar ExactScalar::sqrt_of(std::uint64_t n) {
    if (n == 0) return ExactScalar();
    // Pull square factors out: n = c^2 * m with m square-free.
    std::uint64_t c = 1, m = 1;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        std::uint64_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (std::uint64_t i = 0; i + 1 < e; i += 2) c = checked_mul(c, p);
        if (e & 1) m = checked_mul(m, p);
    }
    if (n > 1) m = checked_mul(m, n); // leftover prime
    return radical(Rational(Int(c)), m);
}

ExactScalar ExactScalar::radical(Rational coeff, std::uint64_t radicand) {
    if (radicand == 0 || coeff == 0) return ExactScalar();
    ExactScalar s;
    s.terms_.emplace_back(radicand, std::move(coeff));
    s.refresh_approx();
    return s;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar s;
    s.terms_.reserve(terms_.size());
    for (const auto& [r, c] : terms_) s.terms_.emplace_back(r, -c);
    s.approx_ = -approx_;
    s.magnitude_ = magnitude_;
    return s;
}

ExactScalar ExactScalar::operator+(const ExactScalar& o) const {
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin(), b = o.terms_.begin();
    while (a != terms_.end() && b != o.terms_.end()) {
        if (a->first < b->first) {
            merged.push_back(*a++);
        } else if (b->first < a->first) {
            merged.push_back(*b++);
        } else {
            Rational c = a->second + b->second;
            if (c != 0) merged.emplace_back(a->first, std::move(c));
            ++a;
            ++b;
        }
    }
    merged.insert(merged.end(), a, terms_.end());
    merged.insert(merged.end(), b, o.terms_.end());
    ExactScalar s;
    s.terms_ = std::move(merged);
    s.refresh_approx();
    return s;
}

ExactScalar ExactScalar::operator-(const ExactScalar& o) const { return *this + (-o); }

ExactScalar ExactScalar::operator*(const ExactScalar& o) const {
    // sqrt(a)*sqrt(b) = g*sqrt((a/g)*(b/g)) with g = gcd(a,b); both factors
    // of the new radicand are coprime and square-free, so closure holds.
    std::vector<Term> products;
    products.reserve(terms_.size() * o.terms_.size());
    for (const auto& [ra, ca] : terms_) {
        for (const auto& [rb, cb] : o.terms_) {
            std::uint64_t g = std::gcd(ra, rb);
            std::uint64_t r = checked_mul(ra / g, rb / g);
            products.emplace_back(r, ca * cb * Rational(Int(g)));
        }
    }
    return from_terms(std::move(products));
}

ExactScalar ExactScalar::inverse() const {
    if (is_zero()) throw std::domain_error("ExactScalar: division by zero");
    // Rationalize by successive conjugation: for each prime p under a
    // radical, multiply by the p-conjugate; the running denominator loses
    // its sqrt(p) component each round and ends up rational.
    std::set<std::uint64_t> primes;
    for (const auto& [r, c] : terms_) {
        for (std::uint64_t p : prime_factors(r)) primes.insert(p);
    }
    ExactScalar num(Rational(1));
    ExactScalar den = *this;
    for (std::uint64_t p : primes) {
        ExactScalar conj;
        conj.terms_.reserve(den.terms_.size());
        for (const auto& [r, c] : den.terms_) {
            conj.terms_.emplace_back(r, r % p == 0 ? -c : c);
        }
        conj.refresh_approx();
        num = num * conj;
        den = den * conj;
    }
    auto rat = den.rational_value();
    if (!rat || *rat == 0) throw std::logic_error("ExactScalar: rationalization failed");
    return ExactScalar(Rational(1) / *rat) * num;
}

ExactScalar ExactScalar::operator/(const ExactScalar& o) const { return *this * o.inverse(); }

int ExactScalar::sign_of_terms(const std::vector<Term>& terms) {
    if (terms.empty()) return 0;
    if (terms.size() == 1) {
        const auto& [r, c] = terms[0];
        return c > 0 ? 1 : -1; // sqrt(r) > 0
    }
    // Split off the largest prime p: x = A + B*sqrt(p) with A, B in the
    // subfield without p.
    std::uint64_t p = 0;
    for (const auto& [r, c] : terms) {
        for (std::uint64_t q : prime_factors(r)) p = std::max(p, q);
    }
    std::vector<Term> a_terms, b_terms;
    for (const auto& [r, c] : terms) {
        if (r % p == 0) {
            b_terms.emplace_back(r / p, c);
        } else {
            a_terms.emplace_back(r, c);
        }
    }
    std::sort(b_terms.begin(), b_terms.end());
    int sa = sign_of_terms(a_terms);
    int sb = sign_of_terms(b_terms);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare |A| with |B|*sqrt(p) via A^2 - p*B^2, which
    // lives in the subfield. It cannot vanish since x*conj_p(x) != 0.
    ExactScalar a = from_terms(a_terms);
    ExactScalar b = from_terms(b_terms);
    ExactScalar t = a * a - ExactScalar(Rational(Int(p))) * b * b;
    int st = sign_of_terms(t.terms_);
    return st > 0 ? sa : sb;
}

int ExactScalar::sign() const {
    if (terms_.empty()) return 0;
    // The cached evaluation errs by well under 1e-13 of the magnitude sum;
    // outside that band its sign is the exact sign.
    double margin = magnitude_ * 1e-12;
    if (std::isfinite(approx_) && std::isfinite(margin)) {
        if (approx_ > margin) return 1;
        if (approx_ < -margin) return -1;
    }
    return sign_of_terms(terms_);
}

int ExactScalar::compare(const ExactScalar& o) const {
    double diff = approx_ - o.approx_;
    double margin = (magnitude_ + o.magnitude_) * 1e-12;
    if (std::isfinite(diff) && std::isfinite(margin)) {
        if (diff > margin) return 1;
        if (diff < -margin) return -1;
    }
    if (terms_ == o.terms_) return 0;
    return (*this - o).sign();
}

double ExactScalar::to_double() const {
    BigFloat acc = 0;
    for (const auto& [r, c] : terms_) {
        BigFloat coeff = BigFloat(numerator(c)) / BigFloat(denominator(c));
        acc += coeff * sqrt(BigFloat(r));
    }
    return static_cast<double>(acc);
}

Int ExactScalar::floor() const {
    if (auto rat = rational_value()) {
        Int q = numerator(*rat) / denominator(*rat);
        if (*rat < 0 && q * denominator(*rat) != numerator(*rat)) --q;
        return q;
    }
    // Seed from the approximation, then correct with exact comparisons.
    Int n(static_cast<long long>(std::floor(to_double())));
    while (*this < ExactScalar(n)) --n;
    while (*this >= ExactScalar(Int(n + 1))) ++n;
    return n;
}

std::size_t ExactScalar::hash() const {
    std::size_t seed = 0;
    for (const auto& [r, c] : terms_) {
        boost::hash_combine(seed, r);
        boost::hash_combine(seed, c);
    }
    return seed;
}

std::string ExactScalar::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [r, c] : terms_) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (r == 1) {
            os << mag;
        } else if (mag == 1) {
            os << "sqrt(" << r << ")";
        } else {
            os << mag << "*sqrt(" << r << ")";
        }
    }
    return os.str();
}

RadicandSet::RadicandSet(const std::vector<std::uint64_t>& radicands) {
    for (std::uint64_t r : radicands) {
        if (r < 2) throw std::invalid_argument("radicands must be >= 2");
        for (std::uint64_t p : prime_factors(r)) primes_.insert(p);
    }
}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;
    const RadicandSet& field;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    // '+', ASCII '-', or U+2212; returns 0 when neither follows.
    int eat_sign() {
        skip_ws();
        if (pos < text.size() && text[pos] == '+') {
            ++pos;
            return 1;
        }
        if (pos < text.size() && text[pos] == '-') {
            ++pos;
            return -1;
        }
        if (pos + 2 < text.size() + 1 && text.substr(pos, 3) == "−") {
            pos += 3;
            return -1;
        }
        return 0;
    }

    Int parse_uint() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("scalar parse: digit expected at offset " +
                                                      std::to_string(start));
        return Int(std::string(text.substr(start, pos - start)));
    }

    bool peek_sqrt() {
        skip_ws();
        return text.substr(pos, 5) == "sqrt(";
    }

    ExactScalar parse_root(const Rational& coeff) {
        pos += 5; // "sqrt("
        Int rad = parse_uint();
        if (!eat(')')) throw std::invalid_argument("scalar parse: expected ')'");
        if (rad > UINT64_MAX) throw UnsupportedFieldError("radicand too large");
        ExactScalar root = ExactScalar::sqrt_of(rad.convert_to<std::uint64_t>());
        for (const auto& [r, c] : root.terms()) {
            if (r == 1) continue;
            std::uint64_t m = r;
            for (std::uint64_t p = 2; p * p <= m; ++p) {
                while (m % p == 0) {
                    if (!field.admits(p))
                        throw UnsupportedFieldError("radicand sqrt(" + std::to_string(r) +
                                                    ") outside the configured field");
                    m /= p;
                }
            }
            if (m > 1 && !field.admits(m))
                throw UnsupportedFieldError("radicand sqrt(" + std::to_string(r) +
                                            ") outside the configured field");
        }
        return ExactScalar(coeff) * root;
    }

    ExactScalar parse_term() {
        if (peek_sqrt()) return parse_root(Rational(1));
        Int num = parse_uint();
        Rational value(num);
        if (eat('/')) {
            Int den = parse_uint();
            if (den == 0) throw std::invalid_argument("scalar parse: zero denominator");
            value = Rational(num, den);
        }
        skip_ws();
        if (eat('*')) {
            if (!peek_sqrt()) throw std::invalid_argument("scalar parse: expected sqrt(...)");
            return parse_root(value);
        }
        return ExactScalar(value);
    }

    ExactScalar parse() {
        int sign = eat_sign();
        if (sign == 0) sign = 1;
        ExactScalar acc = parse_term();
        if (sign < 0) acc = -acc;
        while (true) {
            int s = eat_sign();
            if (s == 0) break;
            ExactScalar t = parse_term();
            acc = s < 0 ? acc - t : acc + t;
        }
        skip_ws();
        if (pos != text.size())
            throw std::invalid_argument("scalar parse: trailing input at offset " +
                                        std::to_string(pos));
        return acc;
    }
};

} // namespace

ExactScalar parse_scalar(std::string_view text, const RadicandSet& field) {
    Parser p{text, 0, field};
    return p.parse();
}

} // namespace icdof
