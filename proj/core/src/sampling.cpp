#include "dobrushin/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "dobrushin/linalg.hpp"

namespace dobrushin::sampling {

Matrix random_markov(int n, Rng& rng) {
  if (n < 1) throw PreconditionError("random_markov: n must be >= 1");
  std::exponential_distribution<double> expo(1.0);
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) m(i, j) = expo(rng);
    m.col(j) /= m.col(j).sum();
  }
  return m;
}

Matrix random_rate_matrix(int n, Rng& rng, double density, double max_rate) {
  if (n < 1) throw PreconditionError("random_rate_matrix: n must be >= 1");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix a = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j && unit(rng) < density) a(i, j) = max_rate * unit(rng);
    }
    a(j, j) = -a.col(j).sum();
  }
  return a;
}

MarkovProjection random_block_projection(int n, Rng& rng) {
  if (n < 1) throw PreconditionError("random_block_projection: n must be >= 1");
  std::uniform_int_distribution<int> count(1, n);
  return random_block_projection(n, count(rng), rng);
}

MarkovProjection random_block_projection(int n, int blocks, Rng& rng) {
  if (blocks < 1 || blocks > n) {
    throw PreconditionError("random_block_projection: need 1 <= blocks <= n");
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // Every block receives one index, the rest are assigned at random.
  std::vector<std::vector<int>> parts(blocks);
  std::uniform_int_distribution<int> pick(0, blocks - 1);
  for (int i = 0; i < n; ++i) parts[i < blocks ? i : pick(rng)].push_back(perm[i]);

  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<Vector> weights;
  for (const auto& part : parts) {
    Vector w = Vector::Zero(n);
    for (int i : part) w(i) = weight(rng);
    weights.push_back(w / w.sum());
  }
  return MarkovProjection::from_blocks(StateSpace::classical(n), std::move(parts),
                                       std::move(weights));
}

Matrix random_invariant_generator(const MarkovProjection& p, Rng& rng, double density,
                                  double max_rate) {
  if (!p.has_blocks()) {
    throw PreconditionError("random_invariant_generator: needs a block projection");
  }
  const int n = p.space().dim();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix b = Matrix::Zero(n, n);
  const BlockStructure& s = *p.blocks();
  for (std::size_t j = 0; j < s.blocks.size(); ++j) {
    const auto& block = s.blocks[j];
    const Vector& q = s.weights[j];
    for (std::size_t x = 0; x < block.size(); ++x) {
      for (std::size_t y = x + 1; y < block.size(); ++y) {
        if (unit(rng) >= density) continue;
        const double sym = max_rate * unit(rng);
        const int i = block[x];
        const int k = block[y];
        b(i, k) = sym * q(i);
        b(k, i) = sym * q(k);
      }
    }
  }
  for (int k = 0; k < n; ++k) b(k, k) = -(b.col(k).sum() - b(k, k));
  return b;
}

Matrix random_commuting_markov(const MarkovProjection& p, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Matrix e = linalg::expm(random_invariant_generator(p, rng, 0.7, 2.0));
  const double c = unit(rng);
  return c * e + (1.0 - c) * p.matrix();
}

Vector random_bloch(Rng& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector v(4);
  for (int i = 0; i < 4; ++i) v(i) = unit(rng);
  return v;
}

}  // namespace dobrushin::sampling
