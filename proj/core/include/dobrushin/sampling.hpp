#pragma once

#include <random>

#include "dobrushin/markov.hpp"

namespace dobrushin::sampling {

using Rng = std::mt19937_64;

/// Column-stochastic matrix with i.i.d. exponential entries per column.
Matrix random_markov(int n, Rng& rng);

/// Rate matrix (off-diagonal >= 0, zero column sums); each off-diagonal rate
/// is nonzero with probability `density` and uniform on (0, max_rate).
Matrix random_rate_matrix(int n, Rng& rng, double density = 0.6, double max_rate = 1.0);

/// Random partition of {0..n-1} into between 1 and n blocks with strictly
/// positive weights on each block.
MarkovProjection random_block_projection(int n, Rng& rng);

/// Same, with the number of blocks fixed.
MarkovProjection random_block_projection(int n, int blocks, Rng& rng);

/// Generator B with B P = P B = 0 for a block projection P: block-diagonal,
/// and on block j reversible with respect to the block weights q(j),
/// B_ik = S_ik q_i for i != k with S symmetric. exp(tB) then lies in the
/// P-invariant class T_t P = P T_t = P.
Matrix random_invariant_generator(const MarkovProjection& p, Rng& rng, double density = 0.5,
                                  double max_rate = 1.0);

/// Markov S with S P = P S: a convex mixture of P and exp(B) for an invariant
/// generator B.
Matrix random_commuting_markov(const MarkovProjection& p, Rng& rng);

/// Uniform random Hermitian Bloch coordinates in [-1, 1]^4.
Vector random_bloch(Rng& rng);

}  // namespace dobrushin::sampling
