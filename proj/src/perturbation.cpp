#include "pipdim/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pipdim/error.hpp"
#include "pipdim/linalg.hpp"

namespace pipdim {

namespace {

bool is_symmetric(const Matrix& M) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * scale;
}

// Indices of `values` sorted by descending magnitude; stable for ties.
std::vector<Eigen::Index> order_by_magnitude(const Vector& values) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(values(a)) > std::abs(values(b));
  });
  return order;
}

void check_spectrum(std::span<const double> spectrum, std::size_t k) {
  require(k >= 1 && k < spectrum.size(), "split k must satisfy 1 <= k < n");
  for (std::size_t i = 1; i < spectrum.size(); ++i) {
    require(spectrum[i] <= spectrum[i - 1], "spectrum must be non-increasing");
  }
  if (!(spectrum[k - 1] - spectrum[k] > 0.0)) {
    fail(ErrorKind::invalid_argument, "degenerate spectral gap");
  }
}

}  // namespace

SvdFactors svd(const Matrix& M) {
  require(M.rows() == M.cols(), "svd: expected a square matrix");
  require(M.allFinite(), "svd: matrix has non-finite entries");
  const Eigen::Index n = M.rows();

  if (is_symmetric(M)) {
    const auto eig = linalg::symmetric_eigen(M);
    const auto order = order_by_magnitude(eig.values);
    SvdFactors f{Matrix(n, n), Vector(n), Matrix(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index src = order[static_cast<std::size_t>(j)];
      const double value = eig.values(src);
      f.U.col(j) = eig.vectors.col(src);
      f.singular_values(j) = std::abs(value);
      f.V.col(j) = value < 0.0 ? Vector(-eig.vectors.col(src)) : Vector(eig.vectors.col(src));
    }
    return f;
  }

  Eigen::JacobiSVD<Matrix> jacobi(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {jacobi.matrixU(), jacobi.singularValues(), jacobi.matrixV()};
}

Vector singular_values(const Matrix& M) {
  require(M.allFinite(), "singular_values: matrix has non-finite entries");
  if (M.rows() == M.cols() && is_symmetric(M)) {
    Vector values = linalg::symmetric_eigenvalues(M).cwiseAbs();
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
  }
  return Eigen::JacobiSVD<Matrix>(M).singularValues();
}

Matrix pip_matrix(const Matrix& E) {
  require(E.allFinite(), "pip_matrix: embedding has non-finite entries");
  return E * E.transpose();
}

double pip_loss(const Matrix& E1, const Matrix& E2) {
  require(E1.rows() == E2.rows(), "pip_loss: row counts differ (" + std::to_string(E1.rows()) +
                                      " vs " + std::to_string(E2.rows()) + ")");
  const Eigen::Index k1 = E1.cols();
  const Eigen::Index k2 = E2.cols();
  if (k1 + k2 == 0 || E1.rows() == 0) return 0.0;

  Matrix joint(E1.rows(), k1 + k2);
  joint << E1, E2;
  Eigen::HouseholderQR<Matrix> qr(joint);
  const Eigen::Index r = std::min(joint.rows(), joint.cols());
  const Matrix R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  const Matrix RA = R.leftCols(k1);
  const Matrix RB = R.rightCols(k2);
  return (RA * RA.transpose() - RB * RB.transpose()).norm();
}

void require_orthonormal(const Matrix& X, const char* name, double tolerance) {
  if (linalg::orthonormality_error(X) > tolerance) {
    fail(ErrorKind::invalid_argument, std::string(name) + " does not have orthonormal columns");
  }
}

PrincipalAngles principal_angles(const Matrix& X0, const Matrix& Y0) {
  require(X0.rows() == Y0.rows() && X0.cols() == Y0.cols(),
          "principal_angles: X0 and Y0 must have the same shape");
  require_orthonormal(X0, "X0");
  require_orthonormal(Y0, "Y0");
  const Eigen::Index k = X0.cols();

  const Matrix cross = X0.transpose() * Y0;
  Vector cosines = Eigen::JacobiSVD<Matrix>(cross).singularValues();
  const Matrix residual = X0 - Y0 * cross.transpose();  // (I - Y0 Y0^T) X0
  Vector sines_desc = Eigen::JacobiSVD<Matrix>(residual).singularValues();

  PrincipalAngles result{Vector(k), Vector(k), Vector(k)};
  for (Eigen::Index i = 0; i < k; ++i) {
    const double c = std::min(cosines(i), 1.0);
    const double s = std::min(sines_desc(k - 1 - i), 1.0);
    result.cosines(i) = c;
    result.sines(i) = s;
    result.angles(i) = std::atan2(s, c);
  }
  return result;
}

ProjectorDifference projector_difference_norm(const Matrix& X0, const Matrix& Y0) {
  require(X0.rows() == Y0.rows() && X0.cols() == Y0.cols(),
          "projector_difference_norm: X0 and Y0 must have the same shape");
  require_orthonormal(X0, "X0");
  require_orthonormal(Y0, "Y0");

  ProjectorDifference result{};
  result.norm = pip_loss(X0, Y0);
  result.complement_norm = (X0 - Y0 * (Y0.transpose() * X0)).norm();

  const double rhs = std::sqrt(2.0) * result.complement_norm;
  if (std::abs(result.norm - rhs) > 1e-8 * std::max(result.norm, rhs) + 1e-12) {
    fail(ErrorKind::numerical, "projector difference identity violated");
  }
  return result;
}

double sylvester_direction_bound(std::span<const double> spectrum, std::size_t k, double sigma) {
  check_spectrum(spectrum, k);
  require(sigma >= 0.0, "sigma must be >= 0");
  long double sum = 0.0L;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t s = k; s < spectrum.size(); ++s) {
      const long double gap = spectrum[r] - spectrum[s];
      sum += 1.0L / (gap * gap);
    }
  }
  return sigma * std::sqrt(static_cast<double>(sum));
}

double sin_theta_bound(std::span<const double> spectrum, std::size_t k, double sigma) {
  check_spectrum(spectrum, k);
  require(sigma >= 0.0, "sigma must be >= 0");
  const double n = static_cast<double>(spectrum.size());
  const double delta = spectrum[k - 1] - spectrum[k];
  return sigma * std::sqrt(static_cast<double>(k) * (n - static_cast<double>(k))) / delta;
}

ProcrustesResult procrustes_align(const Matrix& E, const Matrix& F) {
  require(E.rows() == F.rows() && E.cols() == F.cols(), "procrustes_align: shape mismatch");
  require(E.allFinite() && F.allFinite(), "procrustes_align: non-finite input");

  Eigen::JacobiSVD<Matrix> svd_e(E, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::JacobiSVD<Matrix> svd_f(F, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix V = svd_e.matrixV();
  const Matrix& U = svd_e.matrixU();
  const Matrix& X = svd_f.matrixU();
  for (Eigen::Index i = 0; i < V.cols(); ++i) {
    if (U.col(i).dot(X.col(i)) < 0.0) V.col(i) = -V.col(i);
  }
  ProcrustesResult result{V * svd_f.matrixV().transpose(), 0.0};
  result.residual = (E * result.T - F).norm();
  return result;
}

}  // namespace pipdim
