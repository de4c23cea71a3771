#include "icdof/separability.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace icdof {

namespace {

IntPolynomial polynomial_from_signed(const std::vector<std::int64_t>& coeffs,
                                     const std::vector<Monomial>& monomials) {
    IntPolynomial poly;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0) poly.add_term(monomials[i], Int(coeffs[i]));
    }
    return poly;
}

// Splits a signed coefficient vector into nonnegative positive/negative
// parts, both valid codebook coefficient vectors.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> split_signed(
    const std::vector<std::int64_t>& coeffs) {
    std::vector<std::uint64_t> pos(coeffs.size(), 0), neg(coeffs.size(), 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] > 0) {
            pos[i] = static_cast<std::uint64_t>(coeffs[i]);
        } else if (coeffs[i] < 0) {
            neg[i] = static_cast<std::uint64_t>(-coeffs[i]);
        }
    }
    return {std::move(pos), std::move(neg)};
}

// Builds the collision for h*(w2 - w2_alt) = w1_alt - w1 given signed
// witnesses for the two differences.
CollisionWitness collision_from_differences(const CodebookSet& W,
                                            const std::vector<std::int64_t>& diff2,
                                            const std::vector<std::int64_t>& diff1) {
    CollisionWitness w;
    auto [pos2, neg2] = split_signed(diff2);
    auto [pos1, neg1] = split_signed(diff1);
    w.a2 = std::move(pos2);
    w.a2_alt = std::move(neg2);
    w.a1_alt = std::move(pos1);
    w.a1 = std::move(neg1);
    w.w1 = W.evaluate_witness(w.a1);
    w.w2 = W.evaluate_witness(w.a2);
    w.w1_alt = W.evaluate_witness(w.a1_alt);
    w.w2_alt = W.evaluate_witness(w.a2_alt);
    return w;
}

} // namespace

InjectivityVerdict test_injectivity(const CodebookSet& W, const ExactScalar& h_ii,
                                    std::uint64_t work_cap) {
    if (h_ii.is_zero()) throw std::invalid_argument("test_injectivity: h_ii must be nonzero");
    InjectivityVerdict verdict;
    verdict.coeff_bound = W.coeff_bound;
    verdict.degree_bound = W.degree_bound;

    if (W.is_range()) {
        // W = {0..M}: a collision means h_ii*(w2 - w2') is again an integer
        // difference, i.e. h_ii = p/q with q <= M and |p| <= M.
        auto r = h_ii.rational_value();
        if (!r) return verdict; // irrational over an integer set: injective
        const Int& M = W.range_max();
        Int p = numerator(*r), q = denominator(*r);
        if (q > M || abs(p) > M) return verdict;
        CollisionWitness w;
        if (p > 0) {
            // (0, q) and (p, 0) both map to p.
            w.w1 = ExactScalar(0);
            w.w2 = ExactScalar(q);
            w.w1_alt = ExactScalar(p);
            w.w2_alt = ExactScalar(0);
        } else {
            // (0, 0) and (-p, q) both map to 0.
            w.w1 = ExactScalar(0);
            w.w2 = ExactScalar(0);
            w.w1_alt = ExactScalar(Int(-p));
            w.w2_alt = ExactScalar(q);
        }
        w.a1 = W.witness(w.w1);
        w.a2 = W.witness(w.w2);
        w.a1_alt = W.witness(w.w1_alt);
        w.a2_alt = W.witness(w.w2_alt);
        verdict.status = InjectivityVerdict::Status::violated;
        verdict.collision = std::move(w);
        return verdict;
    }

    const auto values = W.values();
    const std::uint64_t n = values.size();
    if (n * n <= work_cap) {
        // Direct pairwise scan; the reported witness pairs the lowest
        // index collision in (i1, i2) lexicographic order.
        std::vector<ExactScalar> h_times;
        h_times.reserve(n);
        for (const auto& v : values) h_times.push_back(h_ii * v);
        std::unordered_map<ExactScalar, std::pair<std::uint32_t, std::uint32_t>> seen;
        seen.reserve(n * n);
        for (std::uint32_t i1 = 0; i1 < n; ++i1) {
            for (std::uint32_t i2 = 0; i2 < n; ++i2) {
                ExactScalar s = values[i1] + h_times[i2];
                auto [it, inserted] = seen.emplace(std::move(s), std::make_pair(i1, i2));
                if (inserted) continue;
                CollisionWitness w;
                w.w1 = values[it->second.first];
                w.w2 = values[it->second.second];
                w.w1_alt = values[i1];
                w.w2_alt = values[i2];
                w.a1 = W.witness(w.w1);
                w.a2 = W.witness(w.w2);
                w.a1_alt = W.witness(w.w1_alt);
                w.a2_alt = W.witness(w.w2_alt);
                verdict.status = InjectivityVerdict::Status::violated;
                verdict.collision = std::move(w);
                return verdict;
            }
        }
        return verdict;
    }

    // Equivalent search over differences: a collision exists iff some
    // nonzero delta in D := W - W has h_ii*delta in D as well.
    DifferenceSet D = build_difference_set(W.monomial_values, W.coeff_bound - 1, W.degree_bound,
                                           work_cap);
    std::optional<CollisionWitness> found;
    D.for_each_value([&](const ExactScalar& delta) {
        if (found || delta.is_zero()) return;
        ExactScalar image = h_ii * delta;
        if (D.contains(image)) {
            found = collision_from_differences(W, D.witness(delta), D.witness(image));
        }
    });
    if (found) {
        verdict.status = InjectivityVerdict::Status::violated;
        verdict.collision = std::move(found);
    }
    return verdict;
}

std::optional<PolynomialWitness> search_polynomial_witness(const ChannelMatrix& H, int user,
                                                           int deg_bound,
                                                           std::uint64_t coeff_bound,
                                                           std::uint64_t cap) {
    if (deg_bound < 0 || coeff_bound < 1)
        throw std::invalid_argument("search_polynomial_witness: bounds must be >= 1");
    const ExactScalar& h = H.at(user, user);
    if (h.is_zero()) throw std::invalid_argument("search_polynomial_witness: zero diagonal");

    DifferenceSet D = build_difference_set(H, coeff_bound, deg_bound, cap);
    auto monomials = enumerate_monomials(H.users(), deg_bound);

    if (D.is_range()) {
        auto r = h.rational_value();
        if (!r) return std::nullopt;
        const Int& M = D.range_max();
        Int p = numerator(*r), q = denominator(*r);
        if (q > M || abs(p) > M) return std::nullopt;
        PolynomialWitness w;
        w.q = polynomial_from_signed(D.witness(ExactScalar(q)), monomials);
        w.p = polynomial_from_signed(D.witness(ExactScalar(p)), monomials);
        return w;
    }

    std::optional<PolynomialWitness> found;
    D.for_each_value([&](const ExactScalar& qv) {
        if (found || qv.is_zero()) return;
        ExactScalar pv = h * qv;
        if (D.contains(pv)) {
            PolynomialWitness w;
            w.q = polynomial_from_signed(D.witness(qv), monomials);
            w.p = polynomial_from_signed(D.witness(pv), monomials);
            found = std::move(w);
        }
    });
    return found;
}

bool verify_collision(const CollisionWitness& w, const CodebookSet& W, const ExactScalar& h_ii) {
    for (const auto* coeffs : {&w.a1, &w.a2, &w.a1_alt, &w.a2_alt}) {
        for (auto c : *coeffs) {
            if (c >= W.coeff_bound) return false;
        }
    }
    if (W.evaluate_witness(w.a1) != w.w1 || W.evaluate_witness(w.a2) != w.w2 ||
        W.evaluate_witness(w.a1_alt) != w.w1_alt || W.evaluate_witness(w.a2_alt) != w.w2_alt)
        return false;
    if (!W.contains(w.w1) || !W.contains(w.w2) || !W.contains(w.w1_alt) || !W.contains(w.w2_alt))
        return false;
    if (w.w1 == w.w1_alt && w.w2 == w.w2_alt) return false;
    return w.w1 + h_ii * w.w2 == w.w1_alt + h_ii * w.w2_alt;
}

bool verify_polynomial_witness(const PolynomialWitness& w, const ChannelMatrix& H, int user) {
    if (w.p.is_zero() || w.q.is_zero()) return false;
    auto vars = H.offdiag_vector();
    ExactScalar qv = w.q.evaluate(vars);
    if (qv.is_zero()) return false;
    return (H.at(user, user) * qv - w.p.evaluate(vars)).is_zero();
}

PolynomialWitness collision_to_polynomial(const CollisionWitness& w,
                                          const std::vector<Monomial>& monomials) {
    PolynomialWitness out;
    for (std::size_t i = 0; i < monomials.size(); ++i) {
        Int qc = Int(w.a2[i]) - Int(w.a2_alt[i]);
        Int pc = Int(w.a1_alt[i]) - Int(w.a1[i]);
        out.q.add_term(monomials[i], qc);
        out.p.add_term(monomials[i], pc);
    }
    return out;
}

CollisionWitness polynomial_to_collision(const PolynomialWitness& w, const ChannelMatrix& H,
                                         std::uint64_t N, int d) {
    auto monomials = enumerate_monomials(H.users(), d);
    std::map<Monomial, std::size_t> index;
    for (std::size_t i = 0; i < monomials.size(); ++i) index.emplace(monomials[i], i);

    auto signed_coeffs = [&](const IntPolynomial& poly) {
        std::vector<std::int64_t> out(monomials.size(), 0);
        for (const auto& [m, c] : poly.terms()) {
            auto it = index.find(m);
            if (it == index.end())
                throw std::invalid_argument("polynomial_to_collision: degree exceeds d");
            if (abs(c) > N - 1)
                throw std::invalid_argument("polynomial_to_collision: coefficient exceeds N-1");
            out[it->second] = c.convert_to<std::int64_t>();
        }
        return out;
    };

    // Reuse the codebook's monomial evaluation by building a throwaway
    // explicit set with the right frozen order.
    CodebookSet W = build_codebook(H, N, d, UINT64_MAX);
    return collision_from_differences(W, signed_coeffs(w.q), signed_coeffs(w.p));
}

std::optional<RatioObstruction> rational_ratio_obstruction(const ChannelMatrix& H) {
    const int K = H.users();
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            for (int k = 0; k < K; ++k) {
                if (i == j || j == k || i == k) continue;
                if (H.at(i, j).is_zero() || H.at(k, i).is_zero()) continue;
                ExactScalar ratio = cross_ratio(H, i, j, k);
                auto r = ratio.rational_value();
                if (r && *r != 0) return RatioObstruction{i, j, k, *r};
            }
        }
    }
    return std::nullopt;
}

std::optional<std::array<int, 3>> rational_quad_obstruction(const ChannelMatrix& H) {
    if (H.users() != 3)
        throw std::invalid_argument("rational_quad_obstruction: requires K=3");
    auto nonzero_rational = [&](int a, int b) {
        auto r = H.at(a, b).rational_value();
        return r && *r != 0;
    };
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                if (i == j || j == k || i == k) continue;
                if (nonzero_rational(i, j) && nonzero_rational(i, i) && nonzero_rational(k, j) &&
                    nonzero_rational(k, i))
                    return std::array<int, 3>{i, j, k};
            }
        }
    }
    return std::nullopt;
}

const char* topology3_name(Topology3 t) {
    switch (t) {
        case Topology3::reciprocal_pair: return "reciprocal pair";
        case Topology3::one_missing: return "one missing link";
        case Topology3::row_pair: return "two zeros in a row";
        case Topology3::chain_pair: return "chained zeros";
        case Topology3::column_pair: return "two zeros in a column";
        case Topology3::cyclic: return "cyclic zeros";
        case Topology3::triangular: return "triangular zeros";
    }
    return "?";
}

namespace {

using Pos = std::pair<int, int>;
using PosSet = std::set<Pos>;

const std::vector<std::vector<int>> kPerms3 = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                               {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

PosSet permuted_zeros(const PosSet& zeros, const std::vector<int>& perm) {
    PosSet out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i != j && zeros.count({perm[i], perm[j]})) out.insert({i, j});
        }
    }
    return out;
}

std::optional<std::vector<int>> find_relabel(const PosSet& zeros, const PosSet& pattern,
                                             bool exact) {
    for (const auto& perm : kPerms3) {
        PosSet moved = permuted_zeros(zeros, perm);
        if (exact ? moved == pattern
                  : std::includes(moved.begin(), moved.end(), pattern.begin(), pattern.end()))
            return perm;
    }
    return std::nullopt;
}

ExactScalar sqrt_scalar(std::uint64_t n) { return ExactScalar::sqrt_of(n); }

bool diagonals_all_irrational(const ChannelMatrix& H) {
    for (int i = 0; i < H.users(); ++i) {
        if (H.at(i, i).is_rational()) return false;
    }
    return true;
}

// Bounded polynomial search on the witness matrix (evidence on top of the
// exact irrationality check). The witness matrices have 0/1 off-diagonals,
// so these searches are O(1) rational-membership decisions.
bool witness_search_clear(const ChannelMatrix& H) {
    for (int i = 0; i < 3; ++i) {
        if (search_polynomial_witness(H, i, 3, 16, 1u << 20)) return false;
    }
    return true;
}

struct Playbook {
    Classify3Result& result;

    void finish_satisfiable(const ChannelMatrix& scaled, const ScalingPair& factors) {
        if (!diagonals_all_irrational(scaled))
            throw std::logic_error("classify_3user: witness diagonals not irrational");
        result.satisfiable = true;
        result.witness_matrix = scaled;
        result.witness_factors = factors;
        result.witness_search_clear = witness_search_clear(scaled);
    }

    void finish_obstructed(const ChannelMatrix& scaled, const ScalingPair& factors,
                           std::array<int, 3> triple_1based, const std::string& why) {
        // The quad h_ij, h_ii, h_kj, h_ki must be nonzero rational.
        int i = triple_1based[0] - 1, j = triple_1based[1] - 1, k = triple_1based[2] - 1;
        for (const auto& e :
             {scaled.at(i, j), scaled.at(i, i), scaled.at(k, j), scaled.at(k, i)}) {
            auto r = e.rational_value();
            if (!r || *r == 0) throw std::logic_error("classify_3user: invalid rational quad");
        }
        result.satisfiable = false;
        result.obstruction_triple_canonical = triple_1based;
        result.obstruction_triple = {result.relabel[i] + 1, result.relabel[j] + 1,
                                     result.relabel[k] + 1};
        result.obstruction_matrix = scaled;
        result.obstruction_factors = factors;
        result.reason = why;
    }
};

} // namespace

Classify3Result classify_3user(const ChannelMatrix& H) {
    if (H.users() != 3) throw std::invalid_argument("classify_3user: requires K=3");
    if (!validate(H).empty())
        throw std::invalid_argument("classify_3user: matrix fails validation");
    auto zero_list = H.zero_offdiagonals();
    if (zero_list.empty())
        throw std::domain_error("classify_3user: fully connected; use the generic path");
    PosSet zeros(zero_list.begin(), zero_list.end());

    Classify3Result result{};

    // Topology dispatch: a reciprocal pair dominates; otherwise the zero
    // count determines a unique canonical pattern up to relabeling.
    const PosSet reciprocal = {{0, 1}, {1, 0}};
    if (auto perm = find_relabel(zeros, reciprocal, /*exact=*/false)) {
        result.topology = Topology3::reciprocal_pair;
        result.relabel = *perm;
    } else if (auto p1 = find_relabel(zeros, {{0, 1}}, true)) {
        result.topology = Topology3::one_missing;
        result.relabel = *p1;
    } else if (auto p2 = find_relabel(zeros, {{0, 1}, {0, 2}}, true)) {
        result.topology = Topology3::row_pair;
        result.relabel = *p2;
    } else if (auto p3 = find_relabel(zeros, {{0, 1}, {1, 2}}, true)) {
        result.topology = Topology3::chain_pair;
        result.relabel = *p3;
    } else if (auto p4 = find_relabel(zeros, {{1, 0}, {2, 0}}, true)) {
        result.topology = Topology3::column_pair;
        result.relabel = *p4;
    } else if (auto p5 = find_relabel(zeros, {{0, 2}, {1, 0}, {2, 1}}, true)) {
        result.topology = Topology3::cyclic;
        result.relabel = *p5;
    } else if (auto p6 = find_relabel(zeros, {{0, 1}, {0, 2}, {1, 2}}, true)) {
        result.topology = Topology3::triangular;
        result.relabel = *p6;
    } else {
        throw std::logic_error("classify_3user: unreachable topology");
    }

    ChannelMatrix Hc = H.relabeled(result.relabel);
    Playbook play{result};
    const ExactScalar root2 = sqrt_scalar(2), root3 = sqrt_scalar(3), root15 = sqrt_scalar(15);

    switch (result.topology) {
        case Topology3::reciprocal_pair: {
            // Normal form diag(sqrt 2, g2, g3) with 0/1 off-diagonals.
            ScalingPair s = ScalingPair::identity(3);
            s.row[0] = root2 / Hc.at(0, 0);
            if (!Hc.at(0, 2).is_zero()) s.col[2] = (s.row[0] * Hc.at(0, 2)).inverse();
            if (!Hc.at(1, 2).is_zero()) s.row[1] = (Hc.at(1, 2) * s.col[2]).inverse();
            if (!Hc.at(2, 0).is_zero()) s.row[2] = Hc.at(2, 0).inverse();
            if (!Hc.at(2, 1).is_zero()) s.col[1] = (s.row[2] * Hc.at(2, 1)).inverse();
            ChannelMatrix Ht = scale(Hc, s);
            ExactScalar g2 = Ht.at(1, 1), g3 = Ht.at(2, 2);

            // Fallback chain from the playbook; one of the three scaled
            // forms always has an all-irrational diagonal.
            ScalingPair to_bar = ScalingPair::identity(3);
            to_bar.row[0] = root3 / g2;
            to_bar.row[1] = root3 / g2;
            to_bar.col[2] = g2 / root3;
            ScalingPair s_bar = s.compose(to_bar);

            ScalingPair bar_to_prime = ScalingPair::identity(3);
            bar_to_prime.row[2] = root15 / (g2 * g3);
            bar_to_prime.col[0] = (g2 * g3) / root15;
            bar_to_prime.col[1] = (g2 * g3) / root15;
            ScalingPair s_prime = s_bar.compose(bar_to_prime);

            for (const auto& factors : {s, s_bar, s_prime}) {
                ChannelMatrix candidate = scale(Hc, factors);
                if (diagonals_all_irrational(candidate)) {
                    play.finish_satisfiable(candidate, factors);
                    return result;
                }
            }
            throw std::logic_error("classify_3user: reciprocal pair playbook exhausted");
        }
        case Topology3::cyclic: {
            // Normal form [[sqrt2,1,0],[0,sqrt2,1],[1,0,g3]].
            ScalingPair s = ScalingPair::identity(3);
            s.col[0] = root2 / Hc.at(0, 0);
            s.col[1] = Hc.at(0, 1).inverse();
            s.row[1] = root2 / (s.col[1] * Hc.at(1, 1));
            s.col[2] = (s.row[1] * Hc.at(1, 2)).inverse();
            s.row[2] = (s.col[0] * Hc.at(2, 0)).inverse();
            ChannelMatrix Ht = scale(Hc, s);
            ExactScalar g3 = Ht.at(2, 2);
            if (!g3.is_rational()) {
                play.finish_satisfiable(Ht, s);
                return result;
            }
            ScalingPair adjust = ScalingPair::identity(3);
            adjust.col[0] = g3 / root3;
            adjust.row[2] = root3 / g3;
            ScalingPair s_bar = s.compose(adjust);
            play.finish_satisfiable(scale(Hc, s_bar), s_bar);
            return result;
        }
        case Topology3::one_missing: {
            // Normal form [[g1,0,1],[1,g2,1],[1,1,g3]].
            ScalingPair s = ScalingPair::identity(3);
            s.col[2] = Hc.at(0, 2).inverse();
            s.row[1] = (s.col[2] * Hc.at(1, 2)).inverse();
            s.col[0] = (s.row[1] * Hc.at(1, 0)).inverse();
            s.row[2] = (s.col[0] * Hc.at(2, 0)).inverse();
            s.col[1] = (s.row[2] * Hc.at(2, 1)).inverse();
            ChannelMatrix Ht = scale(Hc, s);
            if (diagonals_all_irrational(Ht)) {
                play.finish_satisfiable(Ht, s);
                return result;
            }
            if (Ht.at(0, 0).is_rational()) {
                play.finish_obstructed(Ht, s, {1, 3, 2}, "g1 rational in the one-missing form");
            } else if (Ht.at(1, 1).is_rational()) {
                play.finish_obstructed(Ht, s, {2, 1, 3}, "g2 rational in the one-missing form");
            } else {
                play.finish_obstructed(Ht, s, {3, 1, 2}, "g3 rational in the one-missing form");
            }
            return result;
        }
        case Topology3::row_pair: {
            // Normal form [[sqrt2,0,0],[1,g2,1],[1,1,g3]].
            ScalingPair s = ScalingPair::identity(3);
            s.row[0] = root2 / Hc.at(0, 0);
            s.row[1] = Hc.at(1, 0).inverse();
            s.col[2] = (s.row[1] * Hc.at(1, 2)).inverse();
            s.row[2] = Hc.at(2, 0).inverse();
            s.col[1] = (s.row[2] * Hc.at(2, 1)).inverse();
            ChannelMatrix Ht = scale(Hc, s);
            if (diagonals_all_irrational(Ht)) {
                play.finish_satisfiable(Ht, s);
            } else if (Ht.at(1, 1).is_rational()) {
                play.finish_obstructed(Ht, s, {2, 1, 3}, "g2 rational in the row-pair form");
            } else {
                play.finish_obstructed(Ht, s, {3, 1, 2}, "g3 rational in the row-pair form");
            }
            return result;
        }
        case Topology3::chain_pair: {
            // Normal form [[sqrt2,0,1],[1,g2,0],[1,1,g3]].
            ScalingPair s = ScalingPair::identity(3);
            s.row[0] = root2 / Hc.at(0, 0);
            s.col[2] = (s.row[0] * Hc.at(0, 2)).inverse();
            s.row[1] = Hc.at(1, 0).inverse();
            s.row[2] = Hc.at(2, 0).inverse();
            s.col[1] = (s.row[2] * Hc.at(2, 1)).inverse();
            ChannelMatrix Ht = scale(Hc, s);
            ExactScalar g2 = Ht.at(1, 1), g3 = Ht.at(2, 2);
            if (g2.is_rational()) {
                play.finish_obstructed(Ht, s, {2, 1, 3}, "g2 rational in the chain form");
            } else if (g3.is_rational()) {
                ScalingPair adjust = ScalingPair::identity(3);
                adjust.row[0] = g3 / root3;
                adjust.col[2] = root3 / g3;
                ScalingPair s2 = s.compose(adjust);
                play.finish_satisfiable(scale(Hc, s2), s2);
            } else {
                play.finish_satisfiable(Ht, s);
            }
            return result;
        }
        case Topology3::column_pair: {
            // Normal form [[sqrt2,1,1],[0,g2,1],[0,1,g3]].
            ScalingPair s = ScalingPair::identity(3);
            s.col[0] = root2 / Hc.at(0, 0);
            s.col[1] = Hc.at(0, 1).inverse();
            s.col[2] = Hc.at(0, 2).inverse();
            s.row[1] = (s.col[2] * Hc.at(1, 2)).inverse();
            s.row[2] = (s.col[1] * Hc.at(2, 1)).inverse();
            ChannelMatrix Ht = scale(Hc, s);
            if (Ht.at(1, 1).is_rational()) {
                play.finish_obstructed(Ht, s, {2, 3, 1}, "g2 rational in the column-pair form");
            } else if (Ht.at(2, 2).is_rational()) {
                play.finish_obstructed(Ht, s, {3, 2, 1}, "g3 rational in the column-pair form");
            } else {
                play.finish_satisfiable(Ht, s);
            }
            return result;
        }
        case Topology3::triangular: {
            // Normal form [[sqrt2,0,0],[1,g2,0],[1,1,sqrt2]].
            ScalingPair s = ScalingPair::identity(3);
            s.row[0] = root2 / Hc.at(0, 0);
            s.row[1] = Hc.at(1, 0).inverse();
            s.row[2] = Hc.at(2, 0).inverse();
            s.col[1] = (s.row[2] * Hc.at(2, 1)).inverse();
            s.col[2] = root2 / (s.row[2] * Hc.at(2, 2));
            ChannelMatrix Ht = scale(Hc, s);
            if (Ht.at(1, 1).is_rational()) {
                play.finish_obstructed(Ht, s, {2, 1, 3}, "g2 rational in the triangular form");
            } else {
                play.finish_satisfiable(Ht, s);
            }
            return result;
        }
    }
    throw std::logic_error("classify_3user: unreachable");
}

} // namespace icdof
