#include "pipdim/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "digest.hpp"
#include "pipdim/error.hpp"
#include "pipdim/kernels.hpp"

namespace pipdim {

namespace {

using detail::Fnv1a;

std::string describe(const SignalSpec& spec) {
  std::ostringstream out;
  out << to_string(spec.kind);
  if (spec.kind == SignalKind::sppmi) out << "(shift=" << spec.shift << ")";
  if (spec.kind == SignalKind::log_count) out << (spec.log_count_offset ? "(log1p)" : "(log)");
  return out.str();
}

}  // namespace

std::string to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::pmi: return "pmi";
    case SignalKind::ppmi: return "ppmi";
    case SignalKind::sppmi: return "sppmi";
    case SignalKind::log_count: return "logcount";
  }
  return "unknown";
}

SignalKind signal_kind_from_string(const std::string& name) {
  if (name == "pmi") return SignalKind::pmi;
  if (name == "ppmi") return SignalKind::ppmi;
  if (name == "sppmi") return SignalKind::sppmi;
  if (name == "logcount" || name == "log-count" || name == "log_count") return SignalKind::log_count;
  fail(ErrorKind::invalid_argument, "unknown matrix kind '" + name + "'");
}

std::string counts_digest(const CooccurrenceCounts& counts) {
  Fnv1a hash;
  hash.update(std::uint64_t{counts.size()});
  hash.update(std::uint64_t{counts.window()});
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (auto it = counts.row_begin(i); it != counts.row_end(i); ++it) {
      hash.update(std::uint64_t{i});
      hash.update(std::uint64_t{it->column});
      hash.update(it->value);
    }
  }
  return hash.hex();
}

std::string matrix_digest(const Matrix& values) {
  Fnv1a hash;
  hash.update(std::uint64_t(values.rows()));
  hash.update(std::uint64_t(values.cols()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) hash.update(values(i, j));
  }
  return hash.hex();
}

SignalMatrix build_signal(const CooccurrenceCounts& counts, const SignalSpec& spec) {
  if (spec.kind == SignalKind::sppmi) {
    require(spec.shift > 0.0 && std::isfinite(spec.shift), "SPPMI shift must be positive and finite");
  }
  if (counts.total_pairs() <= 0.0) fail(ErrorKind::degenerate, "no co-occurrence mass");

  const auto n = static_cast<Eigen::Index>(counts.size());
  SignalMatrix signal{Matrix::Zero(n, n), spec, {}};
  kernels::omp::fill_signal(counts, spec, signal.values);
  signal.provenance = counts_digest(counts) + ":" + describe(spec);
  return signal;
}

SignalMatrix pmi_matrix(const CooccurrenceCounts& counts) {
  return build_signal(counts, {SignalKind::pmi, 1.0, true});
}

SignalMatrix ppmi_matrix(const CooccurrenceCounts& counts) {
  return build_signal(counts, {SignalKind::ppmi, 1.0, true});
}

SignalMatrix sppmi_matrix(const CooccurrenceCounts& counts, double shift) {
  return build_signal(counts, {SignalKind::sppmi, shift, true});
}

SignalMatrix logcount_matrix(const CooccurrenceCounts& counts, bool offset) {
  return build_signal(counts, {SignalKind::log_count, 1.0, offset});
}

namespace kernels {

double signal_entry(const SignalSpec& spec, double count, double row_marginal,
                    double column_marginal, double total) {
  if (count <= 0.0) return 0.0;
  if (spec.kind == SignalKind::log_count) {
    return spec.log_count_offset ? std::log1p(count) : std::log(count);
  }
  // p(i,j) / (p(i) p(j)) = C_ij * total / (m_i m_j)
  // Grouped so that swapping the marginals gives a bitwise-identical value.
  const double pmi = (std::log(count) + std::log(total)) -
                     (std::log(row_marginal) + std::log(column_marginal));
  switch (spec.kind) {
    case SignalKind::pmi: return pmi;
    case SignalKind::ppmi: return std::max(pmi, 0.0);
    case SignalKind::sppmi: return std::max(pmi - std::log(spec.shift), 0.0);
    case SignalKind::log_count: break;
  }
  return 0.0;
}

}  // namespace kernels

}  // namespace pipdim
