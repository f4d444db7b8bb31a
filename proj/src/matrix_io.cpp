#include "pipdim/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pipdim/error.hpp"

namespace pipdim {

static_assert(std::endian::native == std::endian::little,
              "matrix files are little-endian; add byte swapping for this platform");

namespace {

constexpr std::array<char, 8> kMagic{'P', 'I', 'P', 'D', 'I', 'M', 'M', '1'};

// Refuse absurd sizes before allocating.
constexpr std::uint64_t kMaxDimension = 1u << 20;

}  // namespace

void write_matrix_binary(std::ostream& out, const Matrix& values) {
  require(values.rows() == values.cols(), "matrix files hold square matrices only");
  out.write(kMagic.data(), kMagic.size());
  const auto n = static_cast<std::uint64_t>(values.rows());
  out.write(reinterpret_cast<const char*>(&n), sizeof(n));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = values;
  out.write(reinterpret_cast<const char*>(row_major.data()),
            static_cast<std::streamsize>(row_major.size() * sizeof(double)));
  if (!out) fail(ErrorKind::io, "failed writing matrix");
}

Matrix read_matrix_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) fail(ErrorKind::io, "not a pipdim matrix file (bad magic bytes)");
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof(n));
  if (!in) fail(ErrorKind::io, "truncated matrix header");
  if (n > kMaxDimension) fail(ErrorKind::io, "matrix dimension " + std::to_string(n) + " is implausibly large");

  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major(dim, dim);
  in.read(reinterpret_cast<char*>(row_major.data()),
          static_cast<std::streamsize>(row_major.size() * sizeof(double)));
  if (!in) fail(ErrorKind::io, "truncated matrix data: expected " + std::to_string(n * n) + " values");
  if (!row_major.allFinite()) fail(ErrorKind::io, "matrix file contains non-finite values");
  return row_major;
}

void write_matrix_triplets(std::ostream& out, const Matrix& values) {
  require(values.rows() == values.cols(), "matrix files hold square matrices only");
  out << values.rows() << '\n';
  char buffer[64];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (values(i, j) == 0.0) continue;
      const auto result = std::to_chars(buffer, buffer + sizeof(buffer), values(i, j));
      out << i << ' ' << j << ' ' << std::string_view(buffer, static_cast<std::size_t>(result.ptr - buffer))
          << '\n';
    }
  }
  if (!out) fail(ErrorKind::io, "failed writing matrix triplets");
}

Matrix read_matrix_triplets(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  auto context = [&] { return "matrix triplets line " + std::to_string(line_number) + ": "; };

  std::uint64_t n = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream header(line);
    if (!(header >> n) || n > kMaxDimension) fail(ErrorKind::io, context() + "bad header, expected `n`");
    break;
  }
  if (line_number == 0) fail(ErrorKind::io, "empty matrix triplets file");

  const auto dim = static_cast<Eigen::Index>(n);
  Matrix values = Matrix::Zero(dim, dim);
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::uint64_t i = 0;
    std::uint64_t j = 0;
    double value = 0.0;
    std::string extra;
    if (!(fields >> i >> j >> value) || (fields >> extra)) {
      fail(ErrorKind::io, context() + "expected `i j value`");
    }
    if (i >= n || j >= n) fail(ErrorKind::io, context() + "index out of range");
    if (!std::isfinite(value)) fail(ErrorKind::io, context() + "non-finite value");
    values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
  }
  return values;
}

void save_matrix(const std::filesystem::path& path, const Matrix& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  write_matrix_binary(out, values);
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path.string() + "'");
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  const bool binary = in.gcount() == static_cast<std::streamsize>(magic.size()) && magic == kMagic;
  in.clear();
  in.seekg(0);
  try {
    return binary ? read_matrix_binary(in) : read_matrix_triplets(in);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace pipdim
