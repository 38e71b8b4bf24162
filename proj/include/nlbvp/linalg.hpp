#pragma once

#include "nlbvp/common.hpp"

namespace nlbvp::linalg {

// Spectral norm |A|_2 (largest singular value).
double operator_norm(const Mat& a);

// Eigenvalues of a symmetric matrix, ascending.
Vec symmetric_eigenvalues(const Mat& a);

// Eigenvectors paired with symmetric_eigenvalues (columns, same order).
struct SymmetricEigen {
  Vec values;
  Mat vectors;
};
SymmetricEigen symmetric_eigen(const Mat& a);

bool is_symmetric(const Mat& a, double tol = 1e-12);

}  // namespace nlbvp::linalg
