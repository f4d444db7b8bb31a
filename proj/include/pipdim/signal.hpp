#pragma once

// Dense signal matrices built from co-occurrence counts.

#include <string>

#include "pipdim/corpus.hpp"
#include "pipdim/types.hpp"

namespace pipdim {

enum class SignalKind { pmi, ppmi, sppmi, log_count };

std::string to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);

/// Construction parameters. `shift` is only meaningful for SPPMI and
/// `log_count_offset` only for log-count.
struct SignalSpec {
  SignalKind kind = SignalKind::ppmi;
  double shift = 1.0;
  bool log_count_offset = true;

  bool operator==(const SignalSpec&) const = default;
};

struct SignalMatrix {
  Matrix values;
  SignalSpec spec;
  std::string provenance;  // digest of the counts plus parameters

  Eigen::Index size() const noexcept { return values.rows(); }
};

/// PMI_ij = log(p(i,j) / (p(i) p(j))) over non-zero cells; zero-count cells
/// and zero-marginal rows are 0. Throws "no co-occurrence mass" on all-zero
/// counts.
SignalMatrix pmi_matrix(const CooccurrenceCounts& counts);
SignalMatrix ppmi_matrix(const CooccurrenceCounts& counts);
/// max(PMI - log(shift), 0); shift must be > 0 and shift = 1 is PPMI.
SignalMatrix sppmi_matrix(const CooccurrenceCounts& counts, double shift);
/// log(1 + C) by default; with `offset == false`, log C on non-zero cells.
SignalMatrix logcount_matrix(const CooccurrenceCounts& counts, bool offset = true);

SignalMatrix build_signal(const CooccurrenceCounts& counts, const SignalSpec& spec);

/// Stable 64-bit FNV-1a digest of the counts, rendered as 16 hex digits.
std::string counts_digest(const CooccurrenceCounts& counts);
std::string matrix_digest(const Matrix& values);

}  // namespace pipdim
