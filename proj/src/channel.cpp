#include "icdof/channel.hpp"

#include <stdexcept>

namespace icdof {

ChannelMatrix::ChannelMatrix(int K, std::vector<ExactScalar> entries)
    : K_(K), entries_(std::move(entries)) {
    if (K < 1) throw std::invalid_argument("ChannelMatrix: K must be positive");
    if (entries_.size() != static_cast<std::size_t>(K) * K)
        throw std::invalid_argument("ChannelMatrix: expected K*K entries");
}

bool ChannelMatrix::is_fully_connected() const {
    for (const auto& e : entries_) {
        if (e.is_zero()) return false;
    }
    return true;
}

std::vector<std::pair<int, int>> ChannelMatrix::zero_offdiagonals() const {
    std::vector<std::pair<int, int>> zeros;
    for (int i = 0; i < K_; ++i) {
        for (int j = 0; j < K_; ++j) {
            if (i != j && at(i, j).is_zero()) zeros.emplace_back(i, j);
        }
    }
    return zeros;
}

std::vector<ExactScalar> ChannelMatrix::offdiag_vector() const {
    std::vector<ExactScalar> v;
    v.reserve(static_cast<std::size_t>(K_) * (K_ - 1));
    for (int i = 0; i < K_; ++i) {
        for (int j = 0; j < K_; ++j) {
            if (i != j) v.push_back(at(i, j));
        }
    }
    return v;
}

int ChannelMatrix::offdiag_index(int i, int j) const {
    if (i == j) throw std::invalid_argument("offdiag_index: diagonal position");
    return i * (K_ - 1) + (j < i ? j : j - 1);
}

ChannelMatrix ChannelMatrix::relabeled(const std::vector<int>& perm) const {
    if (perm.size() != static_cast<std::size_t>(K_))
        throw std::invalid_argument("relabeled: permutation size mismatch");
    std::vector<ExactScalar> out(entries_.size());
    for (int i = 0; i < K_; ++i) {
        for (int j = 0; j < K_; ++j) {
            out[i * K_ + j] = at(perm[i], perm[j]);
        }
    }
    return ChannelMatrix(K_, std::move(out));
}

ScalingPair ScalingPair::identity(int K) {
    ScalingPair s;
    s.row.assign(K, ExactScalar(1));
    s.col.assign(K, ExactScalar(1));
    return s;
}

ScalingPair ScalingPair::compose(const ScalingPair& then) const {
    ScalingPair s;
    s.row.reserve(row.size());
    s.col.reserve(col.size());
    for (std::size_t i = 0; i < row.size(); ++i) s.row.push_back(row[i] * then.row[i]);
    for (std::size_t j = 0; j < col.size(); ++j) s.col.push_back(col[j] * then.col[j]);
    return s;
}

std::vector<Violation> validate(const ChannelMatrix& H) {
    std::vector<Violation> out;
    if (H.users() < 3) {
        out.push_back({Violation::Kind::user_count, 0,
                       "K=" + std::to_string(H.users()) + " but at least 3 users required"});
    }
    for (int i = 0; i < H.users(); ++i) {
        if (H.at(i, i).is_zero()) {
            out.push_back({Violation::Kind::zero_diagonal, i + 1,
                           "diagonal entry h_" + std::to_string(i + 1) +
                               std::to_string(i + 1) + " is zero"});
        }
    }
    return out;
}

ChannelMatrix scale(const ChannelMatrix& H, const ScalingPair& s) {
    const int K = H.users();
    if (s.row.size() != static_cast<std::size_t>(K) || s.col.size() != static_cast<std::size_t>(K))
        throw std::invalid_argument("scale: factor count mismatch");
    for (int i = 0; i < K; ++i) {
        if (s.row[i].is_zero() || s.col[i].is_zero())
            throw std::domain_error("scale: zero scaling factor");
    }
    std::vector<ExactScalar> out;
    out.reserve(static_cast<std::size_t>(K) * K);
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            out.push_back(s.row[i] * H.at(i, j) * s.col[j]);
        }
    }
    return ChannelMatrix(K, std::move(out));
}

std::pair<ChannelMatrix, ScalingPair> canonical_scale(const ChannelMatrix& H) {
    if (!H.is_fully_connected())
        throw std::domain_error("canonical_scale: matrix must be fully connected");
    const int K = H.users();
    if (K < 3) throw std::domain_error("canonical_scale: need K >= 3");

    // Row factors: rows i != 2 below the last get h_2K/(h_21*h_iK), row 2
    // gets 1/h_21, row K gets 1/h_K1. Column factors: columns j < K get
    // h_K1/h_Kj, column K gets h_21/h_2K. (1-based indices as displayed.)
    ScalingPair s = ScalingPair::identity(K);
    const ExactScalar& h21 = H.at(1, 0);
    const ExactScalar& h2K = H.at(1, K - 1);
    const ExactScalar& hK1 = H.at(K - 1, 0);
    for (int i = 0; i < K - 1; ++i) {
        if (i == 1) {
            s.row[i] = h21.inverse();
        } else {
            s.row[i] = h2K / (h21 * H.at(i, K - 1));
        }
    }
    s.row[K - 1] = hK1.inverse();
    for (int j = 0; j < K - 1; ++j) {
        s.col[j] = hK1 / H.at(K - 1, j);
    }
    s.col[K - 1] = h21 / h2K;
    return {scale(H, s), s};
}

ExactScalar cross_ratio(const ChannelMatrix& H, int i, int j, int k) {
    if (i == j || j == k || i == k)
        throw std::invalid_argument("cross_ratio: indices must be distinct");
    const ExactScalar& hij = H.at(i, j);
    const ExactScalar& hki = H.at(k, i);
    if (hij.is_zero())
        throw std::domain_error("cross_ratio: link h_" + std::to_string(i + 1) +
                                std::to_string(j + 1) + " vanishes");
    if (hki.is_zero())
        throw std::domain_error("cross_ratio: link h_" + std::to_string(k + 1) +
                                std::to_string(i + 1) + " vanishes");
    return (H.at(i, i) * H.at(k, j)) / (hij * hki);
}

DofAccounting dof_accounting(const ChannelMatrix& H) {
    const int K = H.users();
    DofAccounting acc;
    for (int i = 0; i < K; ++i) {
        bool isolated = true;
        for (int j = 0; j < K && isolated; ++j) {
            if (j != i && (!H.at(i, j).is_zero() || !H.at(j, i).is_zero())) isolated = false;
        }
        if (isolated) acc.disconnected_users.push_back(i);
    }
    acc.disconnected_count = static_cast<int>(acc.disconnected_users.size());
    const int L = acc.disconnected_count;
    acc.total_dof_if_half_each = Rational(L) + Rational(K - L, 2);
    return acc;
}

} // namespace icdof
