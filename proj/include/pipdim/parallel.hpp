#pragma once

namespace pipdim {

/// Applies the PIPDIM_THREADS environment variable (a positive integer) as
/// the OpenMP thread cap. Returns the resulting maximum thread count.
int configure_threads_from_env();

/// Sets the OpenMP thread cap explicitly (n >= 1).
void set_thread_count(int n);

int max_threads();

}  // namespace pipdim
