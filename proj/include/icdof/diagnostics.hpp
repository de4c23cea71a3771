#pragma once

#include "icdof/channel.hpp"
#include "icdof/distribution.hpp"

#include <string>
#include <vector>

namespace icdof {

struct WindowCheck {
    std::string name;
    double lhs = 0.0;
    double lo = 0.0, hi = 0.0;
    bool pass = false;
    double min_pass_epsilon = 0.5; // smallest eps in (0, 1/2) whose window admits lhs
};

struct BalanceReport {
    double epsilon = 0.0;
    std::vector<WindowCheck> checks;
    bool all_pass = false;
};

/// Entropy balancing under the half-DoF-per-user hypothesis: checks the
/// interference/signal, signal/signal and receive/signal entropy ratios
/// against explicit epsilon windows,
///   (1-2e)/(1+2e) <= H(intf_i)/H(V_i)   <= (1+2e)/(1-2e)
///   (1-2e)/(1+2e) <= H(V_i)/H(V_j)      <= (1+2e)/(1-2e)
///   2(1-2e)/(1+2e)^2 <= H(recv_i)/H(V_i) <= 1 + (1+2e)/(1-2e).
/// Requires eps in (0, 1/2), a fully connected matrix, and non-degenerate
/// digit distributions (the ratios are undefined otherwise).
BalanceReport entropy_balance_report(const ChannelMatrix& H,
                                     const std::vector<DiscreteDistribution>& V, double epsilon,
                                     std::uint64_t cap);

/// Same checks for several epsilons, evaluating the receive/interference
/// convolutions once.
std::vector<BalanceReport> entropy_balance_report(const ChannelMatrix& H,
                                                  const std::vector<DiscreteDistribution>& V,
                                                  const std::vector<double>& epsilons,
                                                  std::uint64_t cap);

struct IneqCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// H(pX + qY) - H(X+Y) <= tau * (2H(X+Y) - H(X) - H(Y)) for nonzero
/// integers p, q with tau = 7*floor(log2|p|) + 7*floor(log2|q|) + 2.
IneqCheck scaled_sum_bound(long long p, long long q, const DiscreteDistribution& X,
                           const DiscreteDistribution& Y, std::uint64_t cap);

/// H(X + Y_1 + ... + Y_m) - H(X) <= sum_i (H(X + Y_i) - H(X)) for
/// independent X, Y_i; equality at m = 1.
IneqCheck sumset_growth_bound(const DiscreteDistribution& X,
                              const std::vector<DiscreteDistribution>& Ys, std::uint64_t cap);

struct RatioCheck {
    double numerator = 0.0;   // H(X1+X2) - H(X1)
    double denominator = 0.0; // H(X1-X2) - H(X1)
    double ratio = 0.0;
    bool holds = false;
    bool vacuous = false; // zero denominator
};

/// 1/2 <= (H(X1+X2) - H(X1)) / (H(X1-X2) - H(X1)) <= 2 for X1, X2 i.i.d.
/// copies of X. A vanishing denominator is reported vacuous, not failed.
RatioCheck iid_difference_ratio(const DiscreteDistribution& X, std::uint64_t cap);

/// H(pX + Z) <= H((p-r)X + rX' + Z) + Delta(X, X') with X' an independent
/// copy of X and Delta = H(X - X') - H(X). Holds for arbitrary real p, r.
IneqCheck copy_substitution_bound(const DiscreteDistribution& X, const DiscreteDistribution& Z,
                                  const ExactScalar& p, const ExactScalar& r, std::uint64_t cap);

} // namespace icdof
