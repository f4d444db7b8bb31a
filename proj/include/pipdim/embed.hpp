#pragma once

// Embeddings E = U_{:,1:k} diag(lambda_1..lambda_k)^alpha and their text format.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pipdim/perturbation.hpp"
#include "pipdim/signal.hpp"

namespace pipdim {

/// Factorizes a symmetric signal matrix. Each column's largest-magnitude
/// entry is made positive so exports are reproducible. If k exceeds the
/// numerical rank the embedding is still produced and `note` says so.
EmbeddingMatrix factorize_embedding(const Matrix& signal, std::size_t k, double alpha);
EmbeddingMatrix factorize_embedding(const SignalMatrix& signal, std::size_t k, double alpha);

/// Same, reusing a factorization (for sweeps over k).
EmbeddingMatrix factorize_embedding(const SvdFactors& factors, std::size_t k, double alpha);

struct LabeledEmbedding {
  std::vector<std::string> tokens;  // row labels, in row order
  EmbeddingMatrix embedding;
};

/// Line 1: `n k`; then `token v_1 ... v_k` per row, 9 significant digits.
void write_embedding_text(std::ostream& out, std::span<const std::string> tokens, const Matrix& E);
LabeledEmbedding read_embedding_text(std::istream& in);

void export_embedding(const std::string& path, std::span<const std::string> tokens, const Matrix& E);
LabeledEmbedding import_embedding(const std::string& path);

}  // namespace pipdim
