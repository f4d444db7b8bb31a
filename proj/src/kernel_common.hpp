#pragma once

// Per-item bodies shared by the serial and OpenMP kernels, so both produce
// bitwise-identical results.

#include "pipdim/kernels.hpp"

namespace pipdim::kernels::detail {

void fill_signal_row(const CooccurrenceCounts& counts, const SignalSpec& spec, std::size_t row,
                     Matrix& out);

Eigen::Index predict_analogy(const Matrix& unit_rows, const AnalogyQuery& query, AnalogyRule rule);

void check_gap_inputs(std::span<const double> lambda, std::size_t n, std::size_t count);

void check_trial_setup(const TrialSetup& setup, std::size_t trials);

}  // namespace pipdim::kernels::detail
