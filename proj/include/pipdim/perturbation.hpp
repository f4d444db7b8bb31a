#pragma once

// Numerical primitives shared by the bounds, the Monte-Carlo selection and
// the evaluation harness: SVD, PIP matrix/loss, principal angles, the
// projector-difference identity, subspace perturbation bounds and Procrustes
// alignment.

#include <span>
#include <string>

#include "pipdim/types.hpp"

namespace pipdim {

/// M = U diag(singular_values) V^T with singular values non-increasing.
struct SvdFactors {
  Matrix U;
  Vector singular_values;
  Matrix V;
};

/// SVD of a finite square matrix. Symmetric input goes through a symmetric
/// eigendecomposition (U = eigenvectors ordered by |eigenvalue|, V = U with
/// the columns of negative eigenvalues negated); anything else through a
/// two-sided Jacobi SVD. Deterministic for a given input.
SvdFactors svd(const Matrix& M);

/// Singular values only, non-increasing.
Vector singular_values(const Matrix& M);

enum class EmbeddingOrigin { oracle, trained, external };

struct EmbeddingMatrix {
  Matrix values;  // n x k
  double alpha = 0.0;
  EmbeddingOrigin origin = EmbeddingOrigin::external;
  std::string note;

  Eigen::Index rows() const noexcept { return values.rows(); }
  Eigen::Index dimension() const noexcept { return values.cols(); }
};

/// E E^T.
Matrix pip_matrix(const Matrix& E);
inline Matrix pip_matrix(const EmbeddingMatrix& E) { return pip_matrix(E.values); }

/// ||E1 E1^T - E2 E2^T||_F without forming an n x n matrix: both factors are
/// projected onto an orthonormal basis of their joint column space (thin QR
/// of [E1 E2]), which keeps full relative accuracy even when the loss is
/// tiny. Column counts may differ; row counts must match.
double pip_loss(const Matrix& E1, const Matrix& E2);
inline double pip_loss(const EmbeddingMatrix& E1, const EmbeddingMatrix& E2) {
  return pip_loss(E1.values, E2.values);
}

/// Throws unless X has orthonormal columns to `tolerance` (max-abs of X^T X - I).
void require_orthonormal(const Matrix& X, const char* name, double tolerance = 1e-8);

struct PrincipalAngles {
  Vector angles;   // ascending, in [0, pi/2]
  Vector cosines;  // singular values of X0^T Y0, descending
  Vector sines;    // singular values of X0^T Y1 (Y1 spans the complement of Y0), ascending
};

/// Principal angles between span(X0) and span(Y0), both n x k orthonormal.
/// The sines come from (I - Y0 Y0^T) X0, which has the same singular values
/// as X0^T Y1 without forming the complement Y1.
PrincipalAngles principal_angles(const Matrix& X0, const Matrix& Y0);

struct ProjectorDifference {
  double norm;             // ||X0 X0^T - Y0 Y0^T||_F
  double complement_norm;  // ||X0^T Y1||_F
};

/// Returns both sides of ||X0X0^T - Y0Y0^T||_F = sqrt(2) ||X0^T Y1||_F and
/// throws ErrorKind::numerical if they disagree beyond 1e-8 relative.
ProjectorDifference projector_difference_norm(const Matrix& X0, const Matrix& Y0);

/// sigma * sqrt(sum_{r <= k < s <= n} (lambda_r - lambda_s)^-2). The spectrum
/// has n entries; throws "degenerate spectral gap" when lambda_k <= lambda_{k+1}.
double sylvester_direction_bound(std::span<const double> spectrum, std::size_t k, double sigma);

/// sigma * sqrt(k (n - k)) / (lambda_k - lambda_{k+1}).
double sin_theta_bound(std::span<const double> spectrum, std::size_t k, double sigma);

struct ProcrustesResult {
  Matrix T;         // k x k orthogonal
  double residual;  // ||E T - F||_F
};

/// T = V Y^T from E = U D V^T and F = X L Y^T, with the sign of each column
/// pair (u_i, x_i) aligned first. Exact when F = E Q for orthogonal Q and E
/// has simple singular values.
ProcrustesResult procrustes_align(const Matrix& E, const Matrix& F);

}  // namespace pipdim
