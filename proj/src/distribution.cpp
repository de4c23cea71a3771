#include "icdof/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace icdof {

DiscreteDistribution DiscreteDistribution::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("distribution: no atoms");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> merged;
    for (auto& a : atoms) {
        if (!merged.empty() && merged.back().value == a.value) {
            merged.back().prob += a.prob;
        } else {
            merged.push_back(std::move(a));
        }
    }
    Rational total = 0;
    for (const auto& a : merged) {
        if (a.prob <= 0) throw std::invalid_argument("distribution: nonpositive probability");
        total += a.prob;
    }
    if (total != 1) throw std::invalid_argument("distribution: probabilities must sum to 1");
    DiscreteDistribution d;
    d.atoms_ = std::move(merged);
    return d;
}

DiscreteDistribution DiscreteDistribution::uniform(const std::vector<ExactScalar>& values) {
    if (values.empty()) throw std::invalid_argument("uniform: empty support");
    std::vector<ExactScalar> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Rational p(1, static_cast<Int>(sorted.size()));
    std::vector<Atom> atoms;
    atoms.reserve(sorted.size());
    for (auto& v : sorted) atoms.push_back({std::move(v), p});
    DiscreteDistribution d;
    d.atoms_ = std::move(atoms);
    return d;
}

DiscreteDistribution DiscreteDistribution::uniform_range(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_range: empty support");
    Rational p(1, Int(n));
    DiscreteDistribution d;
    d.atoms_.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) d.atoms_.push_back({ExactScalar(Int(k)), p});
    return d;
}

DiscreteDistribution DiscreteDistribution::degenerate(ExactScalar value) {
    DiscreteDistribution d;
    d.atoms_.push_back({std::move(value), Rational(1)});
    return d;
}

DiscreteDistribution DiscreteDistribution::scaled(const ExactScalar& a) const {
    if (a.is_zero()) return degenerate(ExactScalar(0));
    std::vector<Atom> atoms;
    atoms.reserve(atoms_.size());
    for (const auto& atom : atoms_) atoms.push_back({a * atom.value, atom.prob});
    return from_atoms(std::move(atoms));
}

namespace {

bool rational_lattice_term(const ExactScalar& coeff, const DiscreteDistribution& dist) {
    if (!coeff.is_rational()) return false;
    for (const auto& atom : dist.atoms()) {
        if (!atom.value.is_rational()) return false;
    }
    return true;
}

} // namespace

DiscreteDistribution dist_lincomb(const std::vector<ExactScalar>& coeffs,
                                  const std::vector<DiscreteDistribution>& dists,
                                  std::uint64_t cap) {
    if (coeffs.size() != dists.size())
        throw std::invalid_argument("dist_lincomb: coefficient/distribution count mismatch");
    // Convolve commensurable (rational-lattice) terms first: they collapse
    // against each other, keeping the intermediate supports small before
    // any radical-valued term spreads them out.
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < dists.size(); ++j) {
        if (rational_lattice_term(coeffs[j], dists[j])) order.push_back(j);
    }
    for (std::size_t j = 0; j < dists.size(); ++j) {
        if (!rational_lattice_term(coeffs[j], dists[j])) order.push_back(j);
    }
    DiscreteDistribution acc = DiscreteDistribution::degenerate(ExactScalar(0));
    for (std::size_t j : order) {
        if (coeffs[j].is_zero()) continue;
        DiscreteDistribution term = dists[j].scaled(coeffs[j]);
        if (acc.is_degenerate() && acc.atoms()[0].value.is_zero()) {
            acc = std::move(term);
            continue;
        }
        std::unordered_map<ExactScalar, Rational> sums;
        sums.reserve(acc.size() * term.size());
        for (const auto& a : acc.atoms()) {
            for (const auto& b : term.atoms()) {
                ExactScalar v = a.value + b.value;
                auto [it, inserted] = sums.emplace(std::move(v), a.prob * b.prob);
                if (!inserted) it->second += a.prob * b.prob;
                if (sums.size() > cap) throw ResourceLimitError("convolution atom cap", cap);
            }
        }
        std::vector<DiscreteDistribution::Atom> atoms;
        atoms.reserve(sums.size());
        for (auto& [v, p] : sums) atoms.push_back({v, std::move(p)});
        acc = DiscreteDistribution::from_atoms(std::move(atoms));
    }
    return acc;
}

double entropy_bits(const DiscreteDistribution& d) {
    double h = 0.0;
    for (const auto& atom : d.atoms()) {
        if (atom.prob == 1) continue;
        double p = to_double(atom.prob);
        h -= p * std::log2(p);
    }
    return h;
}

Rational quantize(const ExactScalar& x, int m) {
    if (m < 0) throw std::invalid_argument("quantize: precision must be >= 0");
    Int scale = ipow(Int(2), static_cast<std::uint64_t>(m));
    Int floored = (ExactScalar(scale) * x).floor();
    return Rational(floored, scale);
}

Rational quantize(double x, int m) {
    if (!std::isfinite(x)) throw std::invalid_argument("quantize: non-finite input");
    // Doubles are dyadic rationals; convert exactly, then floor exactly.
    return quantize(ExactScalar(Rational(x)), m);
}

namespace {

// Number of ways to write k as an ordered sum of m terms in {0..n-1}:
// inclusion-exclusion over the upper bound. Fits 128 bits for the small m
// used here.
unsigned __int128 bounded_compositions(std::uint64_t k, int m, std::uint64_t n) {
    auto comb = [](std::uint64_t x, int r) -> unsigned __int128 {
        unsigned __int128 num = 1;
        for (int i = 1; i <= r; ++i) num *= x + i;
        for (int i = 2; i <= r; ++i) num /= i;
        return num;
    };
    __int128 total = 0;
    unsigned __int128 binom_mj = 1; // C(m, j)
    for (int j = 0; j <= m; ++j) {
        if (j > 0) binom_mj = binom_mj * (m - j + 1) / j;
        if (k < static_cast<std::uint64_t>(j) * n) break;
        __int128 ways = static_cast<__int128>(
            binom_mj * comb(k - static_cast<std::uint64_t>(j) * n, m - 1));
        total += (j % 2 == 0) ? ways : -ways;
    }
    return static_cast<unsigned __int128>(total);
}

} // namespace

double uniform_sum_entropy_bits(int m, const Int& n, std::uint64_t cap) {
    if (m < 0) throw std::invalid_argument("uniform_sum_entropy_bits: m must be >= 0");
    if (n < 1) throw std::invalid_argument("uniform_sum_entropy_bits: n must be >= 1");
    if (m == 0 || n == 1) return 0.0;
    double log2n = log2_int(n);
    if (m == 1) return log2n;

    Int support = Int(m) * (n - 1) + 1;
    if (support > cap) throw ResourceLimitError("uniform-sum support cap", cap);
    // The counting runs in 128-bit integers; the raw binomial products are
    // bounded by support^(m-1).
    if ((m - 1) * log2_int(support) > 118.0)
        throw ResourceLimitError("uniform-sum counter width", cap);
    std::uint64_t nn = n.convert_to<std::uint64_t>();
    std::uint64_t top = static_cast<std::uint64_t>(m) * (nn - 1);

    // H = m*log2(n) - (1/n^m) * sum_k c(k) log2 c(k), folded by the
    // c(k) = c(top-k) symmetry.
    long double weighted = 0.0L;
    for (std::uint64_t k = 0; k <= top / 2; ++k) {
        unsigned __int128 c = bounded_compositions(k, m, nn);
        long double cd = static_cast<long double>(c);
        long double contrib = cd * std::log2(static_cast<double>(cd));
        weighted += (2 * k == top) ? contrib : 2.0L * contrib;
    }
    long double nm = std::pow(static_cast<long double>(nn), m);
    return static_cast<double>(m * static_cast<long double>(log2n) - weighted / nm);
}

} // namespace icdof
