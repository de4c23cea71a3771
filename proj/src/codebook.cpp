#include "icdof/codebook.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace icdof {

ExactScalar Monomial::evaluate(const std::vector<ExactScalar>& vars) const {
    ExactScalar result(1);
    for (std::size_t v = 0; v < exponents.size(); ++v) {
        for (std::uint32_t e = 0; e < exponents[v]; ++e) result = result * vars[v];
    }
    return result;
}

bool Monomial::operator<(const Monomial& o) const {
    std::uint32_t da = degree(), db = o.degree();
    if (da != db) return da < db;
    return exponents < o.exponents;
}

Int monomial_count(int K, int d) {
    if (K < 1 || d < 0) throw std::invalid_argument("monomial_count: bad arguments");
    std::uint64_t n = static_cast<std::uint64_t>(K) * (K - 1);
    return binomial(n + d, d);
}

namespace {

void enumerate_rec(std::vector<Monomial>& out, std::vector<std::uint32_t>& exps,
                   std::size_t var, std::uint32_t remaining) {
    if (var + 1 == exps.size()) {
        exps[var] = remaining;
        out.push_back(Monomial{exps});
        exps[var] = 0;
        return;
    }
    for (std::uint32_t e = 0; e <= remaining; ++e) {
        exps[var] = e;
        enumerate_rec(out, exps, var + 1, remaining - e);
    }
    exps[var] = 0;
}

} // namespace

std::vector<Monomial> enumerate_monomials(int K, int d) {
    std::size_t nvars = static_cast<std::size_t>(K) * (K - 1);
    std::vector<Monomial> out;
    std::vector<std::uint32_t> exps(nvars, 0);
    for (int t = 0; t <= d; ++t) {
        std::vector<Monomial> of_degree;
        enumerate_rec(of_degree, exps, 0, static_cast<std::uint32_t>(t));
        std::sort(of_degree.begin(), of_degree.end());
        out.insert(out.end(), of_degree.begin(), of_degree.end());
    }
    return out;
}

void IntPolynomial::add_term(const Monomial& m, const Int& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.emplace(m, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

int IntPolynomial::degree() const {
    int deg = 0;
    for (const auto& [m, c] : terms_) deg = std::max(deg, static_cast<int>(m.degree()));
    return deg;
}

Int IntPolynomial::max_abs_coeff() const {
    Int best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, Int(abs(c)));
    return best;
}

ExactScalar IntPolynomial::evaluate(const std::vector<ExactScalar>& vars) const {
    ExactScalar acc;
    for (const auto& [m, c] : terms_) {
        acc = acc + ExactScalar(c) * m.evaluate(vars);
    }
    return acc;
}

std::string IntPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c;
        for (std::size_t v = 0; v < m.exponents.size(); ++v) {
            if (m.exponents[v] > 0) {
                os << "*x" << v;
                if (m.exponents[v] > 1) os << "^" << m.exponents[v];
            }
        }
    }
    return os.str();
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const {
    IntPolynomial out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
}

Int CodebookSet::cardinality() const {
    if (range_) return range_max_ + 1;
    return Int(entries_.size());
}

bool CodebookSet::contains(const ExactScalar& v) const {
    if (range_) {
        auto r = v.rational_value();
        if (!r || denominator(*r) != 1) return false;
        return numerator(*r) >= 0 && numerator(*r) <= range_max_;
    }
    return index_.count(v) > 0;
}

std::vector<std::uint64_t> CodebookSet::witness(const ExactScalar& v) const {
    if (!contains(v)) throw std::invalid_argument("witness: value not in codebook");
    std::vector<std::uint64_t> coeffs(monomial_values.size(), 0);
    if (range_) {
        // Distribute greedily over the unit monomials.
        Int rest = numerator(*v.rational_value());
        for (std::size_t i = 0; i < monomial_values.size() && rest > 0; ++i) {
            if (monomial_values[i] == ExactScalar(1)) {
                Int take = std::min(rest, Int(coeff_bound - 1));
                coeffs[i] = take.convert_to<std::uint64_t>();
                rest -= take;
            }
        }
        return coeffs;
    }
    std::uint32_t idx = index_.at(v);
    while (entries_[idx].step >= 0) {
        coeffs[entries_[idx].step] = entries_[idx].coeff;
        idx = entries_[idx].prev;
    }
    return coeffs;
}

ExactScalar CodebookSet::evaluate_witness(const std::vector<std::uint64_t>& coeffs) const {
    if (coeffs.size() != monomial_values.size())
        throw std::invalid_argument("evaluate_witness: coefficient count mismatch");
    ExactScalar acc;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0) acc = acc + ExactScalar(Int(coeffs[i])) * monomial_values[i];
    }
    return acc;
}

std::vector<ExactScalar> CodebookSet::values(std::uint64_t limit) const {
    if (cardinality() > limit) throw ResourceLimitError("codebook materialization", limit);
    std::vector<ExactScalar> out;
    if (range_) {
        for (Int v = 0; v <= range_max_; ++v) out.emplace_back(v);
    } else {
        out.reserve(entries_.size());
        for (const auto& e : entries_) out.push_back(e.value);
    }
    return out;
}

CodebookSet build_codebook(const ChannelMatrix& H, std::uint64_t N, int d, std::uint64_t cap) {
    if (N < 1) throw std::invalid_argument("build_codebook: N must be >= 1");
    if (d < 0) throw std::invalid_argument("build_codebook: d must be >= 0");

    CodebookSet W;
    W.coeff_bound = N;
    W.degree_bound = d;

    auto vars = H.offdiag_vector();
    auto monomials = enumerate_monomials(H.users(), d);
    W.monomial_values.reserve(monomials.size());
    for (const auto& m : monomials) W.monomial_values.push_back(m.evaluate(vars));

    bool zero_one = true;
    std::uint64_t units = 0;
    for (const auto& v : W.monomial_values) {
        if (v == ExactScalar(1)) {
            ++units;
        } else if (!v.is_zero()) {
            zero_one = false;
            break;
        }
    }

    if (zero_one) {
        W.range_ = true;
        W.unit_monomials_ = units;
        W.range_max_ = Int(N - 1) * units;
        if (W.range_max_ + 1 > cap) throw ResourceLimitError("codebook value cap", cap);
        return W;
    }

    // Iterative sumset: S <- S + {a * f_k : a in 0..N-1}, collapsing by
    // exact equality. First writer wins, so insertion order and witness
    // chains are deterministic.
    W.entries_.push_back({});
    W.index_.emplace(ExactScalar(), 0);
    for (std::size_t k = 0; k < W.monomial_values.size(); ++k) {
        const ExactScalar& f = W.monomial_values[k];
        if (f.is_zero()) continue;
        const std::size_t snapshot = W.entries_.size();
        ExactScalar af;
        for (std::uint64_t a = 1; a < N; ++a) {
            af = af + f;
            for (std::size_t e = 0; e < snapshot; ++e) {
                ExactScalar v = W.entries_[e].value + af;
                if (W.index_.count(v)) continue;
                if (W.entries_.size() + 1 > cap)
                    throw ResourceLimitError("codebook value cap", cap);
                W.index_.emplace(v, static_cast<std::uint32_t>(W.entries_.size()));
                W.entries_.push_back({std::move(v), static_cast<std::uint32_t>(e),
                                      static_cast<std::int32_t>(k),
                                      static_cast<std::uint32_t>(a)});
            }
        }
    }
    return W;
}

Int DifferenceSet::cardinality() const {
    if (range_) return 2 * range_max_ + 1;
    return Int(entries_.size());
}

bool DifferenceSet::contains(const ExactScalar& v) const {
    if (range_) {
        auto r = v.rational_value();
        if (!r || denominator(*r) != 1) return false;
        return numerator(*r) >= -range_max_ && numerator(*r) <= range_max_;
    }
    return index_.count(v) > 0;
}

std::vector<std::int64_t> DifferenceSet::witness(const ExactScalar& v) const {
    if (!contains(v)) throw std::invalid_argument("witness: value not in difference set");
    std::vector<std::int64_t> coeffs(monomial_values.size(), 0);
    if (range_) {
        Int rest = numerator(*v.rational_value());
        for (std::size_t i = 0; i < monomial_values.size() && rest != 0; ++i) {
            if (monomial_values[i] == ExactScalar(1)) {
                Int take = rest > 0 ? std::min(rest, Int(coeff_bound))
                                    : std::max(rest, -Int(coeff_bound));
                coeffs[i] = take.convert_to<std::int64_t>();
                rest -= take;
            }
        }
        return coeffs;
    }
    std::uint32_t idx = index_.at(v);
    while (entries_[idx].step >= 0) {
        coeffs[entries_[idx].step] = entries_[idx].coeff;
        idx = entries_[idx].prev;
    }
    return coeffs;
}

ExactScalar DifferenceSet::evaluate_witness(const std::vector<std::int64_t>& coeffs) const {
    if (coeffs.size() != monomial_values.size())
        throw std::invalid_argument("evaluate_witness: coefficient count mismatch");
    ExactScalar acc;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0) acc = acc + ExactScalar(Int(coeffs[i])) * monomial_values[i];
    }
    return acc;
}

DifferenceSet build_difference_set(const ChannelMatrix& H, std::uint64_t c, int d,
                                   std::uint64_t cap) {
    auto vars = H.offdiag_vector();
    auto monomials = enumerate_monomials(H.users(), d);
    std::vector<ExactScalar> values;
    values.reserve(monomials.size());
    for (const auto& m : monomials) values.push_back(m.evaluate(vars));
    return build_difference_set(std::move(values), c, d, cap);
}

DifferenceSet build_difference_set(std::vector<ExactScalar> monomial_values, std::uint64_t c,
                                   int d, std::uint64_t cap) {
    if (d < 0) throw std::invalid_argument("build_difference_set: d must be >= 0");

    DifferenceSet D;
    D.coeff_bound = c;
    D.degree_bound = d;
    D.monomial_values = std::move(monomial_values);

    bool zero_one = true;
    std::uint64_t units = 0;
    for (const auto& v : D.monomial_values) {
        if (v == ExactScalar(1)) {
            ++units;
        } else if (!v.is_zero()) {
            zero_one = false;
            break;
        }
    }

    if (zero_one) {
        D.range_ = true;
        D.range_max_ = Int(c) * units;
        if (2 * D.range_max_ + 1 > cap) throw ResourceLimitError("difference-set value cap", cap);
        return D;
    }

    D.entries_.push_back({});
    D.index_.emplace(ExactScalar(), 0);
    for (std::size_t k = 0; k < D.monomial_values.size(); ++k) {
        const ExactScalar& f = D.monomial_values[k];
        if (f.is_zero()) continue;
        const std::size_t snapshot = D.entries_.size();
        // Coefficients scan 1, -1, 2, -2, ... so small witnesses win.
        for (std::uint64_t mag = 1; mag <= c; ++mag) {
            for (int s : {1, -1}) {
                std::int64_t a = s * static_cast<std::int64_t>(mag);
                ExactScalar af = ExactScalar(Int(a)) * f;
                for (std::size_t e = 0; e < snapshot; ++e) {
                    ExactScalar v = D.entries_[e].value + af;
                    if (D.index_.count(v)) continue;
                    if (D.entries_.size() + 1 > cap)
                        throw ResourceLimitError("difference-set value cap", cap);
                    D.index_.emplace(v, static_cast<std::uint32_t>(D.entries_.size()));
                    D.entries_.push_back({std::move(v), static_cast<std::uint32_t>(e),
                                          static_cast<std::int32_t>(k), a});
                }
            }
        }
    }
    return D;
}

Int codebook_cardinality(const ChannelMatrix& H, const Int& N, int d, std::uint64_t cap) {
    if (N < 1) throw std::invalid_argument("codebook_cardinality: N must be >= 1");
    if (d == 0) {
        if (N > cap) throw ResourceLimitError("codebook value cap", cap);
        return N;
    }
    bool zero_one = true;
    std::uint64_t ones = 0;
    for (const auto& h : H.offdiag_vector()) {
        if (h == ExactScalar(1)) {
            ++ones;
        } else if (!h.is_zero()) {
            zero_one = false;
            break;
        }
    }
    if (zero_one) {
        // Monomials over the unit variables evaluate to 1, the rest to 0:
        // the set is {0 .. (N-1)*binom(ones+d, d)}.
        Int card = (N - 1) * binomial(ones + d, d) + 1;
        if (card > cap) throw ResourceLimitError("codebook value cap", cap);
        return card;
    }
    if (N > UINT64_MAX) throw ResourceLimitError("codebook value cap", cap);
    return build_codebook(H, N.convert_to<std::uint64_t>(), d, cap).cardinality();
}

RatioSeries cardinality_ratio_series(const ChannelMatrix& H, std::uint64_t N, int d_max,
                                     std::uint64_t cap) {
    if (N <= 1) throw std::invalid_argument("cardinality_ratio_series: requires N > 1");
    RatioSeries series;
    Int card = 0;
    for (int d = 1; d <= d_max; ++d) {
        try {
            if (d == 1) card = codebook_cardinality(H, ipow(Int(N), d), d, cap);
            Int next = codebook_cardinality(H, ipow(Int(N), d + 1), d + 1, cap);
            double ratio = log2_int(next) / log2_int(card);
            series.points.push_back({d, card, next, ratio});
            card = next;
        } catch (const ResourceLimitError& e) {
            series.truncated = true;
            series.truncation_note = std::string(e.what()) + " at d=" + std::to_string(d);
            break;
        }
    }
    return series;
}

} // namespace icdof
