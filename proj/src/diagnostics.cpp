#include "icdof/diagnostics.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace icdof {

namespace {

constexpr double kTol = 1e-9;

double ratio_window_lo(double e) { return (1 - 2 * e) / (1 + 2 * e); }
double ratio_window_hi(double e) { return (1 + 2 * e) / (1 - 2 * e); }
double receive_window_lo(double e) { return 2 * (1 - 2 * e) / ((1 + 2 * e) * (1 + 2 * e)); }
double receive_window_hi(double e) { return 1 + (1 + 2 * e) / (1 - 2 * e); }

// Windows widen monotonically in epsilon, so the smallest admitting
// epsilon is found by bisection.
template <typename Lo, typename Hi>
double min_pass_epsilon(double lhs, Lo lo, Hi hi) {
    auto pass = [&](double e) { return lhs >= lo(e) - kTol && lhs <= hi(e) + kTol; };
    if (!pass(0.5 - 1e-12)) return 0.5; // not admitted by any eps < 1/2
    double a = 0.0, b = 0.5 - 1e-12;
    for (int it = 0; it < 80; ++it) {
        double mid = (a + b) / 2;
        (pass(mid) ? b : a) = mid;
    }
    return b;
}

std::vector<ExactScalar> row_coeffs(const ChannelMatrix& H, int i, bool drop_direct) {
    std::vector<ExactScalar> coeffs;
    for (int j = 0; j < H.users(); ++j) {
        coeffs.push_back(drop_direct && j == i ? ExactScalar(0) : H.at(i, j));
    }
    return coeffs;
}

int floor_log2_abs(long long v) {
    unsigned long long a = static_cast<unsigned long long>(v < 0 ? -v : v);
    return std::bit_width(a) - 1;
}

} // namespace

std::vector<BalanceReport> entropy_balance_report(const ChannelMatrix& H,
                                                  const std::vector<DiscreteDistribution>& V,
                                                  const std::vector<double>& epsilons,
                                                  std::uint64_t cap) {
    for (double epsilon : epsilons) {
        if (!(epsilon > 0.0 && epsilon < 0.5))
            throw std::invalid_argument("entropy_balance_report: epsilon must lie in (0, 1/2)");
    }
    if (!H.is_fully_connected())
        throw std::domain_error("entropy_balance_report: requires a fully connected matrix");
    const int K = H.users();
    if (V.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("entropy_balance_report: need one distribution per user");

    std::vector<double> hv(K), h_intf(K), h_recv(K);
    for (int i = 0; i < K; ++i) {
        hv[i] = entropy_bits(V[i]);
        if (hv[i] <= 0.0)
            throw std::domain_error("entropy_balance_report: degenerate digit distribution");
    }
    for (int i = 0; i < K; ++i) {
        h_intf[i] = entropy_bits(dist_lincomb(row_coeffs(H, i, true), V, cap));
        h_recv[i] = entropy_bits(dist_lincomb(row_coeffs(H, i, false), V, cap));
    }

    std::vector<BalanceReport> reports;
    reports.reserve(epsilons.size());
    for (double epsilon : epsilons) {
        BalanceReport report;
        report.epsilon = epsilon;
        auto add_check = [&](std::string name, double lhs, double lo, double hi, auto lo_fn,
                             auto hi_fn) {
            WindowCheck c;
            c.name = std::move(name);
            c.lhs = lhs;
            c.lo = lo;
            c.hi = hi;
            c.pass = lhs >= lo - kTol && lhs <= hi + kTol;
            c.min_pass_epsilon = min_pass_epsilon(lhs, lo_fn, hi_fn);
            report.checks.push_back(std::move(c));
        };

        for (int i = 0; i < K; ++i) {
            add_check("interference/signal user " + std::to_string(i + 1), h_intf[i] / hv[i],
                      ratio_window_lo(epsilon), ratio_window_hi(epsilon), ratio_window_lo,
                      ratio_window_hi);
        }
        for (int i = 0; i < K; ++i) {
            for (int j = 0; j < K; ++j) {
                if (i == j) continue;
                add_check("signal/signal users " + std::to_string(i + 1) + "," +
                              std::to_string(j + 1),
                          hv[i] / hv[j], ratio_window_lo(epsilon), ratio_window_hi(epsilon),
                          ratio_window_lo, ratio_window_hi);
            }
        }
        for (int i = 0; i < K; ++i) {
            add_check("receive/signal user " + std::to_string(i + 1), h_recv[i] / hv[i],
                      receive_window_lo(epsilon), receive_window_hi(epsilon), receive_window_lo,
                      receive_window_hi);
        }

        report.all_pass = true;
        for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
        reports.push_back(std::move(report));
    }
    return reports;
}

BalanceReport entropy_balance_report(const ChannelMatrix& H,
                                     const std::vector<DiscreteDistribution>& V, double epsilon,
                                     std::uint64_t cap) {
    return entropy_balance_report(H, V, std::vector<double>{epsilon}, cap).front();
}

IneqCheck scaled_sum_bound(long long p, long long q, const DiscreteDistribution& X,
                           const DiscreteDistribution& Y, std::uint64_t cap) {
    if (p == 0 || q == 0) throw std::invalid_argument("scaled_sum_bound: p, q must be nonzero");
    const ExactScalar one(1);
    double h_sum = entropy_bits(dist_lincomb({one, one}, {X, Y}, cap));
    double h_scaled =
        entropy_bits(dist_lincomb({ExactScalar(p), ExactScalar(q)}, {X, Y}, cap));
    double tau = 7.0 * floor_log2_abs(p) + 7.0 * floor_log2_abs(q) + 2.0;
    IneqCheck c;
    c.lhs = h_scaled - h_sum;
    c.rhs = tau * (2.0 * h_sum - entropy_bits(X) - entropy_bits(Y));
    c.holds = c.lhs <= c.rhs + kTol;
    return c;
}

IneqCheck sumset_growth_bound(const DiscreteDistribution& X,
                              const std::vector<DiscreteDistribution>& Ys, std::uint64_t cap) {
    if (Ys.empty()) throw std::invalid_argument("sumset_growth_bound: need at least one Y");
    const ExactScalar one(1);
    double hx = entropy_bits(X);
    double rhs = 0.0;
    for (const auto& y : Ys) {
        rhs += entropy_bits(dist_lincomb({one, one}, {X, y}, cap)) - hx;
    }
    std::vector<DiscreteDistribution> all;
    all.push_back(X);
    all.insert(all.end(), Ys.begin(), Ys.end());
    std::vector<ExactScalar> coeffs(all.size(), one);
    IneqCheck c;
    c.lhs = entropy_bits(dist_lincomb(coeffs, all, cap)) - hx;
    c.rhs = rhs;
    c.holds = c.lhs <= c.rhs + kTol;
    return c;
}

RatioCheck iid_difference_ratio(const DiscreteDistribution& X, std::uint64_t cap) {
    if (X.is_degenerate())
        throw std::invalid_argument("iid_difference_ratio: X must be non-degenerate");
    const ExactScalar one(1);
    double hx = entropy_bits(X);
    RatioCheck c;
    c.numerator = entropy_bits(dist_lincomb({one, one}, {X, X}, cap)) - hx;
    c.denominator = entropy_bits(dist_lincomb({one, ExactScalar(-1)}, {X, X}, cap)) - hx;
    if (std::abs(c.denominator) <= kTol) {
        c.vacuous = true;
        c.holds = true;
        return c;
    }
    c.ratio = c.numerator / c.denominator;
    c.holds = c.ratio >= 0.5 - kTol && c.ratio <= 2.0 + kTol;
    return c;
}

IneqCheck copy_substitution_bound(const DiscreteDistribution& X, const DiscreteDistribution& Z,
                                  const ExactScalar& p, const ExactScalar& r, std::uint64_t cap) {
    const ExactScalar one(1);
    double hx = entropy_bits(X);
    double delta = entropy_bits(dist_lincomb({one, ExactScalar(-1)}, {X, X}, cap)) - hx;
    IneqCheck c;
    c.lhs = entropy_bits(dist_lincomb({p, one}, {X, Z}, cap));
    c.rhs = entropy_bits(dist_lincomb({p - r, r, one}, {X, X, Z}, cap)) + delta;
    c.holds = c.lhs <= c.rhs + kTol;
    return c;
}

} // namespace icdof
