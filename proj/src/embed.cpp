#include "pipdim/embed.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "pipdim/error.hpp"
#include "pipdim/linalg.hpp"

namespace pipdim {

EmbeddingMatrix factorize_embedding(const SvdFactors& factors, std::size_t k, double alpha) {
  const auto n = factors.U.rows();
  require(k >= 1, "k must be >= 1");
  require(k <= static_cast<std::size_t>(n),
          "k = " + std::to_string(k) + " exceeds the matrix size n = " + std::to_string(n));
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");

  const auto K = static_cast<Eigen::Index>(k);
  EmbeddingMatrix E{factors.U.leftCols(K), alpha, EmbeddingOrigin::trained, {}};
  for (Eigen::Index j = 0; j < K; ++j) {
    Eigen::Index top = 0;
    E.values.col(j).cwiseAbs().maxCoeff(&top);
    const double sign = E.values(top, j) < 0.0 ? -1.0 : 1.0;
    const double lambda = factors.singular_values(j);
    // alpha = 0 keeps the orthonormal basis even on numerically null directions.
    const double scale = alpha == 0.0 ? 1.0 : linalg::positive_power(lambda, alpha);
    E.values.col(j) *= sign * scale;
  }

  const double largest = factors.singular_values.size() > 0 ? factors.singular_values(0) : 0.0;
  const double tolerance = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * largest;
  Eigen::Index rank = 0;
  while (rank < factors.singular_values.size() && factors.singular_values(rank) > tolerance) ++rank;
  if (K > rank) {
    E.note = "warning: k = " + std::to_string(k) + " exceeds numerical rank " + std::to_string(rank);
  }
  return E;
}

EmbeddingMatrix factorize_embedding(const Matrix& signal, std::size_t k, double alpha) {
  require(k >= 1 && k <= static_cast<std::size_t>(signal.rows()),
          "k = " + std::to_string(k) + " must lie in [1, n = " + std::to_string(signal.rows()) + "]");
  return factorize_embedding(svd(signal), k, alpha);
}

EmbeddingMatrix factorize_embedding(const SignalMatrix& signal, std::size_t k, double alpha) {
  return factorize_embedding(signal.values, k, alpha);
}

void write_embedding_text(std::ostream& out, std::span<const std::string> tokens, const Matrix& E) {
  require(!tokens.empty(), "cannot export an empty vocabulary");
  require(static_cast<Eigen::Index>(tokens.size()) == E.rows(),
          "embedding has " + std::to_string(E.rows()) + " rows but the vocabulary has " +
              std::to_string(tokens.size()) + " tokens");
  require(E.allFinite(), "embedding has non-finite entries");
  for (const auto& token : tokens) {
    require(!token.empty() && token.find_first_of(" \t\r\n") == std::string::npos,
            "token '" + token + "' is empty or contains whitespace");
  }

  const auto precision = out.precision(9);
  out << tokens.size() << ' ' << E.cols() << '\n';
  for (Eigen::Index i = 0; i < E.rows(); ++i) {
    out << tokens[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < E.cols(); ++j) out << ' ' << E(i, j);
    out << '\n';
  }
  out.precision(precision);
  if (!out) fail(ErrorKind::io, "failed writing embedding");
}

LabeledEmbedding read_embedding_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, "embedding file: missing header");
  std::istringstream header(line);
  long long n = -1;
  long long k = -1;
  std::string extra;
  if (!(header >> n >> k) || (header >> extra) || n < 0 || k < 1) {
    fail(ErrorKind::io, "embedding file line 1: malformed header, expected `n k`");
  }
  if (n == 0) fail(ErrorKind::io, "embedding file: empty vocabulary");

  LabeledEmbedding result;
  result.tokens.reserve(static_cast<std::size_t>(n));
  result.embedding.values.resize(n, k);
  result.embedding.origin = EmbeddingOrigin::external;
  std::unordered_set<std::string> seen;

  for (long long row = 0; row < n; ++row) {
    const std::string where = "embedding file line " + std::to_string(row + 2) + ": ";
    if (!std::getline(in, line)) {
      fail(ErrorKind::io, where + "expected " + std::to_string(n) + " rows, found " + std::to_string(row));
    }
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string part; fields >> part;) parts.push_back(std::move(part));
    if (static_cast<long long>(parts.size()) != k + 1) {
      fail(ErrorKind::io, where + "dimension mismatch: expected " + std::to_string(k) + " values, found " +
                              std::to_string(static_cast<long long>(parts.size()) - 1));
    }
    if (!seen.insert(parts[0]).second) fail(ErrorKind::io, where + "duplicate token '" + parts[0] + "'");
    for (long long j = 0; j < k; ++j) {
      const std::string& text = parts[static_cast<std::size_t>(j + 1)];
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != text.size() || !std::isfinite(value)) {
        fail(ErrorKind::io, where + "bad value '" + text + "'");
      }
      result.embedding.values(row, j) = value;
    }
    result.tokens.push_back(std::move(parts[0]));
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      fail(ErrorKind::io, "embedding file: more rows than the header's n = " + std::to_string(n));
    }
  }
  return result;
}

void export_embedding(const std::string& path, std::span<const std::string> tokens, const Matrix& E) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
  write_embedding_text(out, tokens, E);
}

LabeledEmbedding import_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  try {
    return read_embedding_text(in);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

}  // namespace pipdim
