#include "pipdim/linalg.hpp"

#include <lapacke.h>

#include <cmath>

#include "pipdim/error.hpp"

namespace pipdim::linalg {

namespace {

Vector run_dsyevd(Matrix& A, bool vectors) {
  const auto n = static_cast<lapack_int>(A.rows());
  Vector values(n);
  if (n == 0) return values;
  // Eigen is column-major; for a symmetric matrix either layout works.
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                                         A.data(), n, values.data());
  if (info != 0) {
    fail(ErrorKind::numerical, "symmetric eigensolver failed (dsyevd info=" + std::to_string(info) + ")");
  }
  return values;
}

void check_square_finite(const Matrix& A) {
  require(A.rows() == A.cols(), "expected a square matrix");
  require(A.allFinite(), "matrix has non-finite entries");
}

}  // namespace

SymmetricEigen symmetric_eigen(const Matrix& A) {
  check_square_finite(A);
  SymmetricEigen result{{}, A};
  result.values = run_dsyevd(result.vectors, true);
  return result;
}

Vector symmetric_eigenvalues(const Matrix& A) {
  check_square_finite(A);
  Matrix work = A;
  return run_dsyevd(work, false);
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix G(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) G(i, j) = normal(rng);
  }
  return G;
}

Matrix haar_orthonormal(Eigen::Index n, Eigen::Index cols, std::mt19937_64& rng) {
  require(cols >= 0 && cols <= n, "haar_orthonormal: need 0 <= cols <= n");
  const Matrix G = gaussian_matrix(n, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(n, cols);
  const Matrix& R = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

Matrix orthonormal_complement(const Matrix& X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  require(k <= n, "orthonormal_complement: more columns than rows");
  Eigen::HouseholderQR<Matrix> qr(X);
  const Matrix Q = qr.householderQ();
  return Q.rightCols(n - k);
}

Matrix symmetric_gaussian_noise(Eigen::Index n, double sigma, std::mt19937_64& rng) {
  require(sigma >= 0.0, "noise sigma must be >= 0");
  std::normal_distribution<double> normal;
  Matrix Z(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double z = sigma * normal(rng);
      Z(i, j) = z;
      Z(j, i) = z;
    }
  }
  return Z;
}

double orthonormality_error(const Matrix& X) {
  if (X.cols() == 0) return 0.0;
  const Matrix gram = X.transpose() * X;
  return (gram - Matrix::Identity(X.cols(), X.cols())).cwiseAbs().maxCoeff();
}

double positive_power(double x, double p) {
  if (!(x > 0.0)) return 0.0;
  return p == 0.0 ? 1.0 : std::pow(x, p);
}

}  // namespace pipdim::linalg
