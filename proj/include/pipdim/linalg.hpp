#pragma once

#include <random>

#include "pipdim/types.hpp"

namespace pipdim::linalg {

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns are eigenvectors
};

/// Full eigendecomposition of a symmetric matrix (LAPACK dsyevd).
SymmetricEigen symmetric_eigen(const Matrix& A);

/// Eigenvalues only.
Vector symmetric_eigenvalues(const Matrix& A);

/// Matrix with iid N(0, 1) entries, filled column by column.
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// First `cols` columns of a Haar-distributed n x n orthogonal matrix: QR of
/// a Gaussian n x cols matrix with R's diagonal made positive.
Matrix haar_orthonormal(Eigen::Index n, Eigen::Index cols, std::mt19937_64& rng);

/// Orthonormal basis of the orthogonal complement of span(X) (n x (n - k)),
/// from a full Householder QR.
Matrix orthonormal_complement(const Matrix& X);

/// Symmetric noise: upper triangle and diagonal iid N(0, sigma^2), mirrored.
Matrix symmetric_gaussian_noise(Eigen::Index n, double sigma, std::mt19937_64& rng);

/// max |X^T X - I|.
double orthonormality_error(const Matrix& X);

/// x^p for x > 0 and 0 otherwise (so x^0 = 1 only on the positive part).
double positive_power(double x, double p);

}  // namespace pipdim::linalg
