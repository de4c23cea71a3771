#include "doctest.h"

#include "icdof/diagnostics.hpp"

#include <cmath>
#include <random>

using namespace icdof;

namespace {

ChannelMatrix all_ones(int K) {
    return ChannelMatrix(K, std::vector<ExactScalar>(K * K, ExactScalar(1)));
}

DiscreteDistribution random_dist(std::mt19937_64& rng, int max_atoms = 6,
                                 bool with_radicals = false) {
    std::uniform_int_distribution<int> natoms(2, max_atoms);
    std::uniform_int_distribution<int> val(-6, 6);
    std::uniform_int_distribution<int> weight(1, 4);
    std::uniform_int_distribution<int> radical(0, 3);
    int n = natoms(rng);
    std::vector<DiscreteDistribution::Atom> atoms;
    int total = 0;
    std::vector<std::pair<ExactScalar, int>> raw;
    for (int i = 0; i < n; ++i) {
        ExactScalar v(val(rng));
        if (with_radicals && radical(rng) == 0) {
            v = v + ExactScalar::sqrt_of(2) * ExactScalar(val(rng));
        }
        int w = weight(rng);
        raw.emplace_back(std::move(v), w);
        total += w;
    }
    for (auto& [v, w] : raw) atoms.push_back({std::move(v), Rational(w, total)});
    return DiscreteDistribution::from_atoms(std::move(atoms));
}

const std::uint64_t kCap = 1u << 20;

} // namespace

TEST_CASE("balance report windows on uniform digits") {
    auto H = all_ones(3);
    auto u = DiscreteDistribution::uniform_range(64);
    std::vector<DiscreteDistribution> V(3, u);

    // Interference ratio is H(U+U)/log2(64); find its threshold epsilon.
    auto uu = dist_lincomb({ExactScalar(1), ExactScalar(1)}, {u, u}, kCap);
    double rho = entropy_bits(uu) / 6.0;
    double eps_threshold = (rho - 1.0) / (2.0 * (rho + 1.0));

    auto tight = entropy_balance_report(H, V, eps_threshold / 2, kCap);
    CHECK_FALSE(tight.all_pass);

    // The report carries the minimal admitting epsilon per check; above
    // the largest of them everything passes.
    double needed = 0.0;
    for (const auto& c : tight.checks) {
        needed = std::max(needed, c.min_pass_epsilon);
        if (c.name.rfind("interference/signal", 0) == 0) {
            CHECK_FALSE(c.pass);
            CHECK(c.min_pass_epsilon == doctest::Approx(eps_threshold).epsilon(1e-6));
        }
        if (c.name.rfind("signal/signal", 0) == 0) {
            CHECK(c.pass); // identical digits: ratio exactly 1
            CHECK(c.min_pass_epsilon == doctest::Approx(0.0).epsilon(1e-6));
        }
    }
    REQUIRE(needed < 0.5);
    auto loose = entropy_balance_report(H, V, std::min(0.49, needed * 1.01), kCap);
    CHECK(loose.all_pass);
}

TEST_CASE("balance report flags wildly unequal digit entropies") {
    auto H = all_ones(3);
    std::vector<DiscreteDistribution> V = {DiscreteDistribution::uniform_range(2),
                                           DiscreteDistribution::uniform_range(1 << 12),
                                           DiscreteDistribution::uniform_range(2)};
    auto report = entropy_balance_report(H, V, 0.05, 1u << 24);
    bool signal_pair_failed = false;
    for (const auto& c : report.checks) {
        if (c.name.rfind("signal/signal", 0) == 0 && !c.pass) signal_pair_failed = true;
    }
    CHECK(signal_pair_failed);
    CHECK_FALSE(report.all_pass);

    // Near the widest window everything identical passes.
    std::vector<DiscreteDistribution> same(3, DiscreteDistribution::uniform_range(2));
    CHECK(entropy_balance_report(H, same, 0.49, kCap).all_pass);
}

TEST_CASE("balance report validates its inputs") {
    auto H = all_ones(3);
    std::vector<DiscreteDistribution> V(3, DiscreteDistribution::uniform_range(4));
    CHECK_THROWS_AS(entropy_balance_report(H, V, 0.0, kCap), std::invalid_argument);
    CHECK_THROWS_AS(entropy_balance_report(H, V, 0.5, kCap), std::invalid_argument);

    std::vector<DiscreteDistribution> degenerate(3, DiscreteDistribution::degenerate(ExactScalar(7)));
    CHECK_THROWS_AS(entropy_balance_report(H, degenerate, 0.1, kCap), std::domain_error);

    std::vector<ExactScalar> entries(9, ExactScalar(1));
    entries[1] = ExactScalar(0);
    ChannelMatrix sparse(3, std::move(entries));
    CHECK_THROWS_AS(entropy_balance_report(sparse, V, 0.1, kCap), std::domain_error);
}

TEST_CASE("balance windows shrink monotonically as epsilon decreases") {
    double prev_lo = 0.0, prev_hi = 1e18;
    for (double e : {0.4, 0.3, 0.2, 0.1, 0.05}) {
        double lo = (1 - 2 * e) / (1 + 2 * e);
        double hi = (1 + 2 * e) / (1 - 2 * e);
        CHECK(lo > prev_lo);
        CHECK(hi < prev_hi);
        prev_lo = lo;
        prev_hi = hi;
    }
}

TEST_CASE("scaled-sum bound on worked examples") {
    auto u = DiscreteDistribution::uniform_range(2);
    auto trivial = scaled_sum_bound(1, 1, u, u, kCap);
    CHECK(trivial.lhs == doctest::Approx(0.0));
    CHECK(trivial.holds);

    auto c = scaled_sum_bound(2, 1, u, u, kCap);
    CHECK(c.lhs == doctest::Approx(0.5).epsilon(1e-12)); // 2 bits vs 1.5 bits
    CHECK(c.rhs == doctest::Approx(9.0 * (2.0 * 1.5 - 1.0 - 1.0)).epsilon(1e-12));
    CHECK(c.holds);

    CHECK_THROWS_AS(scaled_sum_bound(0, 1, u, u, kCap), std::invalid_argument);
}

TEST_CASE("scaled-sum bound holds across a seeded sweep") {
    std::mt19937_64 rng(2025);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int it = 0; it < 300; ++it) {
        long long p = 0, q = 0;
        while (p == 0) p = coef(rng);
        while (q == 0) q = coef(rng);
        auto x = random_dist(rng);
        auto y = random_dist(rng);
        CHECK(scaled_sum_bound(p, q, x, y, kCap).holds);
    }
}

TEST_CASE("sum growth bound: worked example and sweep") {
    auto u = DiscreteDistribution::uniform_range(2);
    auto c = sumset_growth_bound(u, {u, u}, kCap);
    // H(1/8,3/8,3/8,1/8) - 1 against 2 * 0.5.
    double h3 = -(2.0 * (1.0 / 8) * std::log2(1.0 / 8) + 2.0 * (3.0 / 8) * std::log2(3.0 / 8));
    CHECK(c.lhs == doctest::Approx(h3 - 1.0).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.holds);

    auto single = sumset_growth_bound(u, {u}, kCap);
    CHECK(single.lhs == doctest::Approx(single.rhs).epsilon(1e-12));

    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<int> mdist(1, 3);
    for (int it = 0; it < 200; ++it) {
        auto x = random_dist(rng);
        std::vector<DiscreteDistribution> ys;
        int m = mdist(rng);
        for (int j = 0; j < m; ++j) ys.push_back(random_dist(rng));
        CHECK(sumset_growth_bound(x, ys, kCap).holds);
    }
}

TEST_CASE("iid difference ratio is pinched between 1/2 and 2") {
    auto u2 = iid_difference_ratio(DiscreteDistribution::uniform_range(2), kCap);
    CHECK(u2.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u2.holds);

    auto u3 = iid_difference_ratio(DiscreteDistribution::uniform_range(3), kCap);
    CHECK(u3.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u3.holds);

    std::mt19937_64 rng(99);
    for (int it = 0; it < 200; ++it) {
        auto x = random_dist(rng);
        if (x.is_degenerate()) continue;
        auto c = iid_difference_ratio(x, kCap);
        CHECK(c.holds);
    }
    CHECK_THROWS_AS(iid_difference_ratio(DiscreteDistribution::degenerate(ExactScalar(1)), kCap),
                    std::invalid_argument);
}

TEST_CASE("copy substitution bound: worked example, p=r, and sweep") {
    auto u = DiscreteDistribution::uniform_range(2);
    auto c = copy_substitution_bound(u, u, ExactScalar(1), ExactScalar(1), kCap);
    CHECK(c.lhs == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.holds);

    std::mt19937_64 rng(4711);
    const ExactScalar candidates[] = {ExactScalar(1), ExactScalar(-1), ExactScalar(2),
                                      ExactScalar(-2), ExactScalar::sqrt_of(2)};
    std::uniform_int_distribution<int> pick(0, 4);
    for (int it = 0; it < 150; ++it) {
        auto x = random_dist(rng, 5);
        auto z = random_dist(rng, 5);
        const ExactScalar& p = candidates[pick(rng)];
        const ExactScalar& r = candidates[pick(rng)];
        auto check = copy_substitution_bound(x, z, p, r, kCap);
        CHECK(check.holds);

        // Delta(X, X') = H(X-X') - H(X) is nonnegative.
        double hx = entropy_bits(x);
        double hdiff = entropy_bits(
            dist_lincomb({ExactScalar(1), ExactScalar(-1)}, {x, x}, kCap));
        CHECK(hdiff >= hx - 1e-9);
    }
}
