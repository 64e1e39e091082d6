#include "polariton/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <lapacke.h>

namespace polariton {

EigenPair dense_lowest(const Matrix& h) {
  const lapack_int n = lapack_int(h.rows());
  Matrix a = h;
  Vector w(n);
  Matrix z(n, 1);
  std::vector<lapack_int> support(2 * std::size_t(std::max<lapack_int>(n, 1)));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, 1, 0.0,
                                         &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != 1) {
    throw Error(ErrorCode::LanczosNotConverged, "hamiltonian", "dsyevr failed with info " + std::to_string(info));
  }
  EigenPair out;
  out.value = w[0];
  out.vector = z.col(0);
  out.residual = (h * out.vector - out.value * out.vector).norm();
  return out;
}

EigenPair lanczos_lowest(const SparseMatrix& h, const LanczosOptions& options) {
  const Index n = h.rows();
  if (n <= 64) {
    EigenPair p = dense_lowest(Matrix(h));
    return p;
  }
  const Index block = std::min<Index>(n, 160);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  Vector start(n);
  for (Index i = 0; i < n; ++i) start[i] = gauss(rng);
  start.normalize();

  EigenPair out;
  int total = 0;
  while (total < options.max_iterations) {
    Matrix v(n, block);
    std::vector<double> alpha, beta;
    v.col(0) = start;
    Index m = 0;
    double ritz_value = 0.0;
    Vector ritz;
    for (; m < block && total < options.max_iterations; ++m, ++total) {
      Vector w = h * v.col(m);
      alpha.push_back(v.col(m).dot(w));
      // full reorthogonalisation, twice
      for (int pass = 0; pass < 2; ++pass) w -= v.leftCols(m + 1) * (v.leftCols(m + 1).transpose() * w);
      const double b = w.norm();

      const Index k = m + 1;
      Matrix t = Matrix::Zero(k, k);
      for (Index i = 0; i < k; ++i) t(i, i) = alpha[std::size_t(i)];
      for (Index i = 0; i + 1 < k; ++i) t(i, i + 1) = t(i + 1, i) = beta[std::size_t(i)];
      Eigen::SelfAdjointEigenSolver<Matrix> tri(t);
      ritz_value = tri.eigenvalues()[0];
      const double estimate = std::abs(b * tri.eigenvectors()(k - 1, 0));
      const bool exhausted = b < 1e-14 || m + 1 == block || total + 1 == options.max_iterations;
      if (estimate < 0.1 * options.tolerance || exhausted) {
        ritz = v.leftCols(k) * tri.eigenvectors().col(0);
        ritz.normalize();
        ++m;
        ++total;
        break;
      }
      beta.push_back(b);
      v.col(m + 1) = w / b;
    }

    out.value = ritz.dot(h * ritz);
    out.vector = ritz;
    out.residual = (h * ritz - out.value * ritz).norm();
    out.iterations = total;
    if (out.residual < options.tolerance) return out;
    start = ritz;
  }
  throw Error(ErrorCode::LanczosNotConverged, "hamiltonian",
              "Lanczos stopped after " + std::to_string(out.iterations) + " iterations with residual " +
                  std::to_string(out.residual));
}

}  // namespace polariton
