#pragma once

// Intrinsic evaluation: word relatedness correlation and analogy accuracy.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pipdim/kernels.hpp"
#include "pipdim/types.hpp"

namespace pipdim {

struct RelatednessRecord {
  std::string word1;
  std::string word2;
  double score;
};

struct RelatednessTestSet {
  std::string name;
  std::vector<RelatednessRecord> records;
};

struct AnalogyRecord {
  std::string a, b, c, expected;
  std::string section;
};

struct AnalogyTestSet {
  std::string name;
  std::vector<AnalogyRecord> records;
};

/// `word1<TAB>word2<TAB>score` per line; words are lowercased. A first line
/// whose score does not parse is taken as a header and skipped.
RelatednessTestSet read_relatedness(std::istream& in, std::string name = {});
RelatednessTestSet load_relatedness(const std::string& path);

/// Google format: `: section` headers, then `a b c d` lines; lowercased.
AnalogyTestSet read_analogies(std::istream& in, std::string name = {});
AnalogyTestSet load_analogies(const std::string& path);

enum class Correlation { spearman, pearson };

double pearson_correlation(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of average ranks.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

struct RelatednessResult {
  double correlation = 0.0;
  double coverage = 0.0;           // covered / total
  std::size_t covered = 0;
  std::size_t total = 0;
  std::size_t zero_norm_pairs = 0;  // in vocabulary but excluded
};

/// Correlation between cos(v_w1, v_w2) and the human scores over pairs with
/// both words in `tokens` (row labels of E). Throws when nothing is covered.
RelatednessResult relatedness_correlation(const Matrix& E, std::span<const std::string> tokens,
                                          const RelatednessTestSet& test,
                                          Correlation method = Correlation::spearman);

struct AnalogyResult {
  double accuracy = 0.0;  // correct / covered
  double coverage = 0.0;
  std::size_t correct = 0;
  std::size_t covered = 0;
  std::size_t total = 0;
};

/// Answers each fully in-vocabulary question with the best row other than
/// a, b and c. Throws when nothing is covered.
AnalogyResult analogy_accuracy(const Matrix& E, std::span<const std::string> tokens,
                               const AnalogyTestSet& test,
                               kernels::AnalogyRule rule = kernels::AnalogyRule::cos_add);

}  // namespace pipdim
