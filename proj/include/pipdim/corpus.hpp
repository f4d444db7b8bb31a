#pragma once

// Corpus ingestion: tokenization, vocabulary, windowed co-occurrence counts
// and the chunked two-way split used by the count-twice noise estimator.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pipdim {

using TokenId = std::uint32_t;

/// Tokens ordered by descending corpus frequency, ties broken
/// lexicographically.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws on duplicate tokens, mismatched lengths or increasing counts.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> counts);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::optional<TokenId> find(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, TokenId> index_;
};

struct TokenStream {
  std::vector<TokenId> ids;

  std::size_t total_tokens() const noexcept { return ids.size(); }
};

struct TokenizeOptions {
  std::size_t max_vocab = 10000;
  std::uint64_t min_count = 0;
};

struct TokenizedCorpus {
  Vocabulary vocabulary;
  TokenStream stream;
};

/// Lowercases (ASCII) and splits on whitespace. Tokens outside the top
/// `max_vocab` or with fewer than `min_count` occurrences are deleted from
/// the stream. Throws on empty input or invalid UTF-8 (with byte offset).
TokenizedCorpus tokenize(std::string_view text, const TokenizeOptions& options = {});

/// Maps text onto an existing vocabulary, deleting out-of-vocabulary tokens.
TokenStream encode(std::string_view text, const Vocabulary& vocabulary);

/// Symmetric sparse co-occurrence counts stored row-wise (CSR).
class CooccurrenceCounts {
 public:
  struct Entry {
    TokenId column;
    double value;
  };

  CooccurrenceCounts() = default;

  /// Builds from (i, j, value) triplets; duplicates are summed. The result
  /// must be symmetric, otherwise this throws.
  struct Triplet {
    TokenId row;
    TokenId column;
    double value;
  };
  CooccurrenceCounts(std::size_t n, std::size_t window, std::vector<Triplet> triplets);

  std::size_t size() const noexcept { return n_; }
  std::size_t window() const noexcept { return window_; }
  double total_pairs() const noexcept { return total_; }
  const std::vector<double>& row_marginals() const noexcept { return marginals_; }
  std::size_t nonzeros() const noexcept { return entries_.size(); }

  /// Non-zero entries of row i, sorted by column.
  std::vector<Entry>::const_iterator row_begin(std::size_t i) const {
    return entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  }
  std::vector<Entry>::const_iterator row_end(std::size_t i) const {
    return entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  }

  double at(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_ = 0;
  std::size_t window_ = 0;
  double total_ = 0.0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Entry> entries_;
  std::vector<double> marginals_;
};

/// For every position i and every j with 0 < |j - i| <= window, adds one
/// to C[t_i][t_j]. Throws when window == 0 or an id is out of range.
CooccurrenceCounts count_cooccurrences(const TokenStream& stream, std::size_t n,
                                       std::size_t window);

struct CorpusSplit {
  TokenStream first;
  TokenStream second;
  std::vector<std::size_t> first_chunks;   // chunk indices, ascending
  std::vector<std::size_t> second_chunks;  // chunk indices, ascending
  std::size_t chunk_length = 0;
};

/// Cuts the stream into contiguous chunks of `chunk_length` tokens (the last
/// may be shorter) and deals them at random into two halves of equal chunk
/// count (the first half takes the extra chunk when the count is odd).
/// Deterministic given the seed.
CorpusSplit split_corpus(const TokenStream& stream, std::uint64_t seed,
                         std::size_t chunk_length = 1000);

// Serialization. Vocabulary: one `token<TAB>count` line per token.
void write_vocabulary(std::ostream& out, const Vocabulary& vocabulary);
Vocabulary read_vocabulary(std::istream& in);

// Counts: header `n window nnz`, then one `i j value` line per stored entry.
void write_counts(std::ostream& out, const CooccurrenceCounts& counts);
CooccurrenceCounts read_counts(std::istream& in);

}  // namespace pipdim
