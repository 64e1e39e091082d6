#pragma once

#include "polariton/model.hpp"

namespace polariton {

struct LanczosOptions {
  double tolerance = 1e-10;  // on ||H v - E v||
  int max_iterations = 600;
  unsigned seed = 12345;
};

struct EigenPair {
  double value = 0.0;
  Vector vector;
  double residual = 0.0;
  int iterations = 0;
};

/// Lowest eigenpair of a sparse symmetric matrix by Lanczos with full
/// reorthogonalisation. Throws LanczosNotConverged with the final residual.
[[nodiscard]] EigenPair lanczos_lowest(const SparseMatrix& h, const LanczosOptions& options = {});

/// Lowest eigenpair of a dense symmetric matrix (LAPACK dsyevr, index range 1..1).
[[nodiscard]] EigenPair dense_lowest(const Matrix& h);

}  // namespace polariton
