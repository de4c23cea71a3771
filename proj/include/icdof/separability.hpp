#pragma once

#include "icdof/channel.hpp"
#include "icdof/codebook.hpp"

#include <array>
#include <optional>
#include <string>

namespace icdof {

/// A violated injectivity instance: two distinct pairs with the same
/// image under (w1, w2) -> w1 + h_ii*w2, plus coefficient vectors that
/// reproduce the four codebook values.
struct CollisionWitness {
    ExactScalar w1, w2;         // first pair
    ExactScalar w1_alt, w2_alt; // second pair
    std::vector<std::uint64_t> a1, a2, a1_alt, a2_alt;
};

/// Nonzero integer polynomials P, Q in the off-diagonal variables with
/// h_ii * Q(h^) - P(h^) = 0 and Q(h^) != 0.
struct PolynomialWitness {
    IntPolynomial p, q;
};

struct InjectivityVerdict {
    enum class Status { injective_up_to_bounds, violated };
    Status status = Status::injective_up_to_bounds;
    std::optional<CollisionWitness> collision;
    std::uint64_t coeff_bound = 0; // N of the codebook searched
    int degree_bound = 0;          // d of the codebook searched

    bool violated() const { return status == Status::violated; }
};

/// Checks (w1, w2) -> w1 + h_ii*w2 for collisions on W x W by exact
/// arithmetic. Small sets use the direct pairwise scan (first witness is
/// the lowest index pair); larger sets switch to an equivalent search over
/// the difference set W - W, still exact. work_cap bounds both routes;
/// exceeding it raises ResourceLimitError.
InjectivityVerdict test_injectivity(const CodebookSet& W, const ExactScalar& h_ii,
                                    std::uint64_t work_cap);

/// Searches for nonzero P, Q of degree <= deg_bound with coefficients
/// bounded by coeff_bound such that h_ii*Q - P vanishes at the channel.
/// Absence only certifies the searched box, nothing beyond it.
std::optional<PolynomialWitness> search_polynomial_witness(const ChannelMatrix& H, int user,
                                                           int deg_bound,
                                                           std::uint64_t coeff_bound,
                                                           std::uint64_t cap);

/// Exact re-verification of a reported collision.
bool verify_collision(const CollisionWitness& w, const CodebookSet& W, const ExactScalar& h_ii);

/// Exact re-verification of a polynomial witness against the channel.
bool verify_polynomial_witness(const PolynomialWitness& w, const ChannelMatrix& H, int user);

/// The two directions of the collision/polynomial equivalence.
PolynomialWitness collision_to_polynomial(const CollisionWitness& w,
                                          const std::vector<Monomial>& monomials);
CollisionWitness polynomial_to_collision(const PolynomialWitness& w, const ChannelMatrix& H,
                                         std::uint64_t N, int d);

struct RatioObstruction {
    int i, j, k;    // 0-based distinct users
    Rational ratio; // h_ii*h_kj / (h_ij*h_ki), nonzero rational
};

/// First triple (lexicographic scan) whose cross ratio is a nonzero
/// rational; certifies that H and every scaled version violate the
/// injectivity condition.
std::optional<RatioObstruction> rational_ratio_obstruction(const ChannelMatrix& H);

/// For K=3: first triple (i,j,k) with h_ij, h_ii, h_kj, h_ki all nonzero
/// rationals. Such a quad caps the total DoF strictly below 3/2.
std::optional<std::array<int, 3>> rational_quad_obstruction(const ChannelMatrix& H);

/// The 3-user non-fully-connected topologies, canonical zero patterns in
/// 0-based positions:
///   reciprocal_pair (0,1),(1,0)    one_missing  (0,1)
///   row_pair        (0,1),(0,2)    chain_pair   (0,1),(1,2)
///   column_pair     (1,0),(2,0)    cyclic       (0,2),(1,0),(2,1)
///   triangular      (0,1),(0,2),(1,2)
/// Any 3-user non-fully-connected zero-set relabels onto exactly one of
/// these (four or more zeros always contain a reciprocal pair).
enum class Topology3 {
    reciprocal_pair,
    one_missing,
    row_pair,
    chain_pair,
    column_pair,
    cyclic,
    triangular,
};

const char* topology3_name(Topology3 t);

/// Outcome of the 3-user decision procedure. Matrices are stated in the
/// canonical labeling; `relabel` maps canonical user u to original user
/// relabel[u]. The scaling factors apply to H.relabeled(relabel).
struct Classify3Result {
    Topology3 topology;
    std::vector<int> relabel;

    bool satisfiable = false;
    std::optional<ChannelMatrix> witness_matrix; // all diagonals irrational
    std::optional<ScalingPair> witness_factors;
    bool witness_search_clear = false; // bounded polynomial search found nothing

    std::optional<std::array<int, 3>> obstruction_triple_canonical; // 1-based
    std::optional<std::array<int, 3>> obstruction_triple;           // original labels, 1-based
    std::optional<ChannelMatrix> obstruction_matrix;
    std::optional<ScalingPair> obstruction_factors;

    std::string reason;
};

/// Decision procedure for 3-user non-fully-connected matrices: identifies
/// the topology up to relabeling, applies the scaling playbook, and either
/// produces a scaled matrix with all-irrational diagonals or a rational
/// quad obstruction. Throws for fully connected inputs.
Classify3Result classify_3user(const ChannelMatrix& H);

} // namespace icdof
