#pragma once

#include "tikreg/core_ops.hpp"
#include "tikreg/verify.hpp"

#include <cstdint>

namespace testing_support {

using tikreg::Matrix;
using tikreg::Rng;
using tikreg::Vector;

inline Vector random_vector(Rng& rng, Eigen::Index dim, double scale = 1.0) {
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.uniform(-scale, scale);
  return v;
}

inline Matrix random_psd(Rng& rng, Eigen::Index dim, Eigen::Index rank) {
  Matrix B(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) B(i, j) = rng.uniform(-1.0, 1.0);
  return B * B.transpose();
}

struct PairStats {
  std::uint64_t pairs = 0;
  std::uint64_t violations = 0;
  double worst_excess = -1e300;
};

// |F(x) - F(y)| <= |x - y| + slack over random pairs; mixes wide and close pairs.
template <class F>
PairStats sample_nonexpansive(const F& op, Eigen::Index dim, std::uint64_t pairs, std::uint64_t seed,
                              double scale = 3.0) {
  Rng rng(seed);
  PairStats st;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const Vector x = random_vector(rng, dim, scale);
    const Vector y = i % 2 == 0 ? random_vector(rng, dim, scale)
                                : Vector(x + random_vector(rng, dim, 1e-3));
    const double excess = (op(x) - op(y)).norm() - (x - y).norm();
    st.worst_excess = std::max(st.worst_excess, excess);
    ++st.pairs;
    if (excess > tikreg::kSlack) ++st.violations;
  }
  return st;
}

// |J(x) - J(y)|^2 <= <x - y, J(x) - J(y)> + slack.
template <class F>
PairStats sample_firmly_nonexpansive(const F& op, Eigen::Index dim, std::uint64_t pairs,
                                     std::uint64_t seed, double scale = 3.0) {
  Rng rng(seed);
  PairStats st;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const Vector x = random_vector(rng, dim, scale);
    const Vector y = random_vector(rng, dim, scale);
    const Vector d = op(x) - op(y);
    const double excess = d.squaredNorm() - (x - y).dot(d);
    st.worst_excess = std::max(st.worst_excess, excess);
    ++st.pairs;
    if (excess > tikreg::kSlack) ++st.violations;
  }
  return st;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace testing_support
