#pragma once

#include <random>

#include "uhf/linalg.hpp"

namespace testing {

inline uhf::Matrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> d;
  uhf::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = {d(rng), d(rng)};
  return m;
}

inline uhf::Matrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  uhf::Matrix m = random_matrix(rng, n);
  return (m + m.adjoint()) / 2.0;
}

inline uhf::Matrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  Eigen::HouseholderQR<uhf::Matrix> qr(random_matrix(rng, n));
  uhf::Matrix q = qr.householderQ();
  uhf::Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline uhf::Matrix rank_one(const uhf::Vector& v) { return v * v.adjoint() / v.squaredNorm(); }

// Independent dense product, no Eigen expression templates.
inline uhf::Matrix naive_product(const uhf::Matrix& a, const uhf::Matrix& b) {
  uhf::Matrix c = uhf::Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

inline double largest_singular_value(const uhf::Matrix& a) {
  Eigen::JacobiSVD<uhf::Matrix> svd(a);
  return svd.singularValues()(0);
}

// Basis permutation P with P (x_0 (x) ... (x) x_{m-1}) P* = x_{sigma[0]} (x) ... (x) x_{sigma[m-1]}.
inline uhf::Unitary reorder_permutation(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& sigma) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<std::size_t> perm(total);
  std::vector<std::size_t> idx(dims.size());
  for (std::size_t src = 0; src < total; ++src) {
    std::size_t r = src;
    for (std::size_t f = dims.size(); f-- > 0;) {
      idx[f] = r % dims[f];
      r /= dims[f];
    }
    std::size_t tgt = 0;
    for (std::size_t t = 0; t < sigma.size(); ++t) tgt = tgt * dims[sigma[t]] + idx[sigma[t]];
    perm[src] = tgt;
  }
  return uhf::Unitary::permutation(std::move(perm));
}

}  // namespace testing
