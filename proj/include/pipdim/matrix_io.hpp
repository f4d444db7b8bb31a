#pragma once

// Matrix files.
//
// Binary: the 8 bytes "PIPDIMM1", a little-endian uint64 n, then n*n
// little-endian float64 values in row-major order.
// Text triplets: a first line `n`, then one `i j value` line per non-zero
// entry with 0-based indices; entries not listed are 0.

#include <filesystem>
#include <iosfwd>

#include "pipdim/types.hpp"

namespace pipdim {

void write_matrix_binary(std::ostream& out, const Matrix& values);
Matrix read_matrix_binary(std::istream& in);

void write_matrix_triplets(std::ostream& out, const Matrix& values);
Matrix read_matrix_triplets(std::istream& in);

/// Writes the binary format.
void save_matrix(const std::filesystem::path& path, const Matrix& values);

/// Reads either format, detected from the magic bytes.
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace pipdim
