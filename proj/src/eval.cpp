#include "pipdim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "pipdim/error.hpp"

namespace pipdim {

namespace {

std::string lowercase(std::string text) {
  for (char& c : text) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return text;
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

std::unordered_map<std::string, Eigen::Index> index_tokens(std::span<const std::string> tokens) {
  std::unordered_map<std::string, Eigen::Index> index;
  index.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) index.emplace(tokens[i], static_cast<Eigen::Index>(i));
  return index;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

RelatednessTestSet read_relatedness(std::istream& in, std::string name) {
  RelatednessTestSet test{std::move(name), {}};
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::istringstream stream(line);
    for (std::string field; std::getline(stream, field, '\t');) fields.push_back(trim(field));
    const std::string where = "relatedness line " + std::to_string(line_number) + ": ";
    if (fields.size() != 3) fail(ErrorKind::io, where + "expected `word1<TAB>word2<TAB>score`");
    double score = 0.0;
    std::size_t used = 0;
    try {
      score = std::stod(fields[2], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != fields[2].size() || !std::isfinite(score)) {
      if (test.records.empty() && line_number == 1) continue;  // header row
      fail(ErrorKind::io, where + "bad score '" + fields[2] + "'");
    }
    if (fields[0].empty() || fields[1].empty()) fail(ErrorKind::io, where + "empty word");
    test.records.push_back({lowercase(fields[0]), lowercase(fields[1]), score});
  }
  if (test.records.size() < 2) fail(ErrorKind::io, "relatedness test set needs at least 2 records");
  return test;
}

RelatednessTestSet load_relatedness(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  try {
    return read_relatedness(in, path);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

AnalogyTestSet read_analogies(std::istream& in, std::string name) {
  AnalogyTestSet test{std::move(name), {}};
  std::string line;
  std::string section;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == ':') {
      section = trim(text.substr(1));
      continue;
    }
    std::istringstream stream(text);
    std::vector<std::string> words;
    for (std::string word; stream >> word;) words.push_back(lowercase(word));
    const std::string where = "analogy line " + std::to_string(line_number) + ": ";
    if (words.size() != 4) fail(ErrorKind::io, where + "expected 4 words");
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (words[i] == words[j]) fail(ErrorKind::io, where + "words must be distinct");
      }
    }
    test.records.push_back({words[0], words[1], words[2], words[3], section});
  }
  if (test.records.empty()) fail(ErrorKind::io, "analogy test set has no questions");
  return test;
}

AnalogyTestSet load_analogies(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  try {
    return read_analogies(in, path);
  } catch (const Error& e) {
    fail(e.kind(), path + ": " + e.what());
  }
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "correlation: length mismatch");
  require(x.size() >= 2, "correlation: need at least 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0 && syy > 0.0)) fail(ErrorKind::degenerate, "correlation undefined: constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "correlation: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson_correlation(rx, ry);
}

RelatednessResult relatedness_correlation(const Matrix& E, std::span<const std::string> tokens,
                                          const RelatednessTestSet& test, Correlation method) {
  require(static_cast<Eigen::Index>(tokens.size()) == E.rows(), "embedding rows and tokens differ in count");
  const auto index = index_tokens(tokens);
  const Vector norms = E.rowwise().norm();

  RelatednessResult result;
  result.total = test.records.size();
  std::vector<double> cosines;
  std::vector<double> scores;
  for (const auto& record : test.records) {
    const auto i = index.find(record.word1);
    const auto j = index.find(record.word2);
    if (i == index.end() || j == index.end()) continue;
    const double ni = norms(i->second);
    const double nj = norms(j->second);
    if (!(ni > 0.0 && nj > 0.0)) {
      ++result.zero_norm_pairs;
      continue;
    }
    cosines.push_back(E.row(i->second).dot(E.row(j->second)) / (ni * nj));
    scores.push_back(record.score);
  }
  result.covered = cosines.size();
  if (result.covered == 0) fail(ErrorKind::degenerate, "relatedness: no test pair is covered by the vocabulary");
  result.coverage = static_cast<double>(result.covered) / static_cast<double>(result.total);
  result.correlation = method == Correlation::spearman ? spearman_correlation(cosines, scores)
                                                       : pearson_correlation(cosines, scores);
  return result;
}

AnalogyResult analogy_accuracy(const Matrix& E, std::span<const std::string> tokens,
                               const AnalogyTestSet& test, kernels::AnalogyRule rule) {
  require(static_cast<Eigen::Index>(tokens.size()) == E.rows(), "embedding rows and tokens differ in count");
  const auto index = index_tokens(tokens);

  std::vector<kernels::AnalogyQuery> queries;
  std::vector<Eigen::Index> expected;
  for (const auto& record : test.records) {
    const auto a = index.find(record.a);
    const auto b = index.find(record.b);
    const auto c = index.find(record.c);
    const auto d = index.find(record.expected);
    if (a == index.end() || b == index.end() || c == index.end() || d == index.end()) continue;
    queries.push_back({a->second, b->second, c->second});
    expected.push_back(d->second);
  }

  AnalogyResult result;
  result.total = test.records.size();
  result.covered = queries.size();
  if (result.covered == 0) fail(ErrorKind::degenerate, "analogy: no question is covered by the vocabulary");

  // Zero rows stay zero and score as orthogonal to everything.
  Matrix unit = E;
  for (Eigen::Index i = 0; i < unit.rows(); ++i) {
    const double norm = unit.row(i).norm();
    if (norm > 0.0) unit.row(i) /= norm;
  }
  const auto predictions = kernels::omp::analogy_predictions(unit, queries, rule);
  for (std::size_t q = 0; q < predictions.size(); ++q) {
    if (predictions[q] == expected[q]) ++result.correct;
  }
  result.coverage = static_cast<double>(result.covered) / static_cast<double>(result.total);
  result.accuracy = static_cast<double>(result.correct) / static_cast<double>(result.covered);
  return result;
}

}  // namespace pipdim
