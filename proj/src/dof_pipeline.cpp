#include "icdof/dof_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace icdof {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<ExactScalar> row_coefficients(const ChannelMatrix& H, int i, bool drop_direct) {
    std::vector<ExactScalar> coeffs;
    coeffs.reserve(H.users());
    for (int j = 0; j < H.users(); ++j) {
        coeffs.push_back(drop_direct && j == i ? ExactScalar(0) : H.at(i, j));
    }
    return coeffs;
}

} // namespace

SelfSimilarCode::SelfSimilarCode(DiscreteDistribution base_, Rational ratio_)
    : base(std::move(base_)), ratio(std::move(ratio_)) {
    if (ratio <= 0 || ratio >= 1)
        throw std::invalid_argument("SelfSimilarCode: ratio must lie in (0,1)");
    description = "X = sum_k r^k Psi_k, r = " + ratio.str();
}

std::vector<double> dof_lower_bound(const ChannelMatrix& H,
                                    const std::vector<DiscreteDistribution>& dists,
                                    const Rational& r, std::uint64_t cap) {
    if (r <= 0 || r >= 1) throw std::invalid_argument("dof_lower_bound: r must lie in (0,1)");
    if (dists.size() != static_cast<std::size_t>(H.users()))
        throw std::invalid_argument("dof_lower_bound: need one distribution per user");
    const double log_inv_r = -log2_rational(r);
    std::vector<double> bounds;
    bounds.reserve(H.users());
    for (int i = 0; i < H.users(); ++i) {
        double h_full = entropy_bits(dist_lincomb(row_coefficients(H, i, false), dists, cap));
        double h_intf = entropy_bits(dist_lincomb(row_coefficients(H, i, true), dists, cap));
        bounds.push_back(std::min(h_full / log_inv_r, 1.0) - std::min(h_intf / log_inv_r, 1.0));
    }
    return bounds;
}

SeparabilityCheck separability_check(const ChannelMatrix& H, int i,
                                     const std::vector<DiscreteDistribution>& dists,
                                     std::uint64_t cap) {
    if (dists.size() != static_cast<std::size_t>(H.users()))
        throw std::invalid_argument("separability_check: need one distribution per user");
    DiscreteDistribution signal = dists[i].scaled(H.at(i, i));
    DiscreteDistribution intf = dist_lincomb(row_coefficients(H, i, true), dists, cap);
    std::vector<ExactScalar> one_one = {ExactScalar(1), ExactScalar(1)};
    DiscreteDistribution sum = dist_lincomb(one_one, {signal, intf}, cap);
    SeparabilityCheck check;
    check.additive = sum.size() == signal.size() * intf.size();
    check.gap_bits = entropy_bits(signal) + entropy_bits(intf) - entropy_bits(sum);
    return check;
}

std::vector<DiscreteDistribution> scaled_input_compensation(
    const ScalingPair& s, const std::vector<DiscreteDistribution>& dists) {
    if (s.col.size() != dists.size())
        throw std::invalid_argument("scaled_input_compensation: factor count mismatch");
    std::vector<DiscreteDistribution> out;
    out.reserve(dists.size());
    for (std::size_t i = 0; i < dists.size(); ++i) {
        if (s.col[i].is_zero())
            throw std::domain_error("scaled_input_compensation: zero column factor");
        out.push_back(dists[i].scaled(s.col[i].inverse()));
    }
    return out;
}

namespace {

// Closed-form per-user entry for matrices whose off-diagonals are all 0/1:
// digits are uniform on the integer range {0..n-1}, the interference is an
// m-fold uniform sum, and an exactly-irrational direct gain makes the
// receive support a product (h_ii*(k - k') is never a nonzero integer).
struct FastUserEntry {
    double bound = kNaN;
    bool truncated = false;
    bool separable = false;
    double gap = 0.0;
};

FastUserEntry fast_user_entry(const ChannelMatrix& H, int i, const Int& n, double log2n,
                              std::uint64_t cap) {
    FastUserEntry entry;
    int m = 0;
    for (int j = 0; j < H.users(); ++j) {
        if (j != i && !H.at(i, j).is_zero()) ++m;
    }
    const double log_inv_r = 2.0 * log2n;
    double h_intf, h_full;
    try {
        h_intf = uniform_sum_entropy_bits(m, n, cap);
        const ExactScalar& h_ii = H.at(i, i);
        if (!h_ii.is_rational()) {
            h_full = log2n + h_intf;
            entry.separable = true;
            entry.gap = 0.0;
        } else if (*h_ii.rational_value() == 1) {
            h_full = uniform_sum_entropy_bits(m + 1, n, cap);
            entry.separable = (m == 0);
            entry.gap = log2n + h_intf - h_full;
        } else {
            // Rational non-unit direct gain over the integer lattice has no
            // closed form here; the entry stays truncated.
            entry.truncated = true;
            return entry;
        }
    } catch (const ResourceLimitError&) {
        entry.truncated = true;
        return entry;
    }
    entry.bound = std::min(h_full / log_inv_r, 1.0) - std::min(h_intf / log_inv_r, 1.0);
    return entry;
}

} // namespace

PipelineResult sufficiency_pipeline(const ChannelMatrix& H, std::uint64_t N, int d_max,
                                    std::uint64_t cap) {
    auto violations = validate(H);
    if (!violations.empty())
        throw std::invalid_argument("sufficiency_pipeline: " + violations.front().message);
    if (N <= static_cast<std::uint64_t>(H.users()) - 1)
        throw std::invalid_argument("sufficiency_pipeline: requires N > K-1");
    if (d_max < 1) throw std::invalid_argument("sufficiency_pipeline: d_max must be >= 1");

    const int K = H.users();
    bool zero_one = true;
    for (const auto& h : H.offdiag_vector()) {
        if (!h.is_zero() && h != ExactScalar(1)) {
            zero_one = false;
            break;
        }
    }

    PipelineResult result;
    result.N = N;
    result.d_max = d_max;
    result.cap = cap;

    for (int d = 1; d <= d_max; ++d) {
        PipelineRow row;
        row.d = d;
        Int n;
        try {
            n = codebook_cardinality(H, ipow(Int(N), d), d, cap);
        } catch (const ResourceLimitError& e) {
            result.truncated = true;
            result.note = std::string(e.what()) + " at d=" + std::to_string(d);
            break;
        }
        row.cardinality = n;
        const double log2n = log2_int(n);

        try {
            Int next = codebook_cardinality(H, ipow(Int(N), d + 1), d + 1, cap);
            row.summing_bound = 1.0 - log2_int(next) / (2.0 * log2n);
        } catch (const ResourceLimitError&) {
            row.summing_bound = kNaN;
            row.summing_truncated = true;
            result.truncated = true;
        }

        if (zero_one) {
            for (int i = 0; i < K; ++i) {
                FastUserEntry entry = fast_user_entry(H, i, n, log2n, cap);
                row.user_bounds.push_back(entry.bound);
                row.user_truncated.push_back(entry.truncated);
                row.separable.push_back(entry.separable);
                row.separability_gap.push_back(entry.gap);
                if (entry.truncated) result.truncated = true;
            }
        } else {
            try {
                Int box = ipow(Int(N), d);
                if (box > UINT64_MAX) throw ResourceLimitError("codebook value cap", cap);
                auto W = build_codebook(H, box.convert_to<std::uint64_t>(), d, cap);
                auto psi = DiscreteDistribution::uniform(W.values(cap));
                std::vector<DiscreteDistribution> dists(K, psi);
                Rational r = Rational(1, n * n);
                auto bounds = dof_lower_bound(H, dists, r, cap);
                for (int i = 0; i < K; ++i) {
                    auto check = separability_check(H, i, dists, cap);
                    row.user_bounds.push_back(bounds[i]);
                    row.user_truncated.push_back(false);
                    row.separable.push_back(check.additive);
                    row.separability_gap.push_back(check.gap_bits);
                }
            } catch (const ResourceLimitError&) {
                row.user_bounds.assign(K, kNaN);
                row.user_truncated.assign(K, true);
                row.separable.assign(K, false);
                row.separability_gap.assign(K, 0.0);
                result.truncated = true;
            }
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

} // namespace icdof
