#include "nlbvp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>

namespace nlbvp::linalg {

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(a).singularValues()[0];
}

bool is_symmetric(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

SymmetricEigen symmetric_eigen(const Mat& a) {
  const Mat sym = 0.5 * (a + a.transpose());
  const Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vec symmetric_eigenvalues(const Mat& a) {
  const Mat sym = 0.5 * (a + a.transpose());
  return Eigen::SelfAdjointEigenSolver<Mat>(sym, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace nlbvp::linalg
