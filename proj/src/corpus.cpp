#include "pipdim/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "pipdim/error.hpp"

namespace pipdim {

namespace {

// Returns the byte offset of the first invalid sequence, or npos.
std::size_t find_invalid_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t size = text.size();
  std::size_t i = 0;
  while (i < size) {
    const unsigned char lead = bytes[i];
    std::size_t length = 0;
    std::uint32_t code = 0;
    if (lead < 0x80) {
      ++i;
      continue;
    } else if ((lead & 0xE0) == 0xC0) {
      length = 2;
      code = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
      length = 3;
      code = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
      length = 4;
      code = lead & 0x07;
    } else {
      return i;
    }
    if (i + length > size) return i;
    for (std::size_t k = 1; k < length; ++k) {
      if ((bytes[i + k] & 0xC0) != 0x80) return i;
      code = (code << 6) | (bytes[i + k] & 0x3F);
    }
    // Overlong encodings, surrogates and out-of-range code points.
    static constexpr std::uint32_t kMinimum[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (code < kMinimum[length] || code > 0x10FFFF || (code >= 0xD800 && code <= 0xDFFF)) {
      return i;
    }
    i += length;
  }
  return std::string_view::npos;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

template <typename Fn>
void for_each_token(std::string_view text, Fn&& fn) {
  std::string token;
  for (char c : text) {
    if (is_space(c)) {
      if (!token.empty()) {
        fn(token);
        token.clear();
      }
    } else {
      token.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    }
  }
  if (!token.empty()) fn(token);
}

void check_utf8(std::string_view text) {
  if (const auto offset = find_invalid_utf8(text); offset != std::string_view::npos) {
    fail(ErrorKind::invalid_argument,
         "invalid UTF-8 at byte offset " + std::to_string(offset));
  }
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> counts)
    : tokens_(std::move(tokens)), counts_(std::move(counts)) {
  require(tokens_.size() == counts_.size(), "vocabulary: token and count lengths differ");
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    require(!tokens_[i].empty(), "vocabulary: empty token");
    if (i > 0) {
      require(counts_[i] <= counts_[i - 1],
              "vocabulary: counts must be non-increasing (token '" + tokens_[i] + "')");
    }
    const auto [it, inserted] = index_.emplace(tokens_[i], static_cast<TokenId>(i));
    require(inserted, "vocabulary: duplicate token '" + tokens_[i] + "'");
  }
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenizedCorpus tokenize(std::string_view text, const TokenizeOptions& options) {
  check_utf8(text);

  std::unordered_map<std::string, std::uint64_t> frequency;
  for_each_token(text, [&](const std::string& token) { ++frequency[token]; });
  if (frequency.empty()) fail(ErrorKind::invalid_argument, "empty corpus");

  std::vector<std::pair<std::string, std::uint64_t>> ranked(frequency.begin(), frequency.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  for (auto& [token, count] : ranked) {
    if (tokens.size() >= options.max_vocab || count < options.min_count) break;
    tokens.push_back(std::move(token));
    counts.push_back(count);
  }
  if (tokens.empty()) {
    fail(ErrorKind::degenerate, "empty vocabulary after max_vocab/min_count filtering");
  }

  TokenizedCorpus corpus{Vocabulary(std::move(tokens), std::move(counts)), {}};
  corpus.stream = encode(text, corpus.vocabulary);
  return corpus;
}

TokenStream encode(std::string_view text, const Vocabulary& vocabulary) {
  check_utf8(text);
  TokenStream stream;
  for_each_token(text, [&](const std::string& token) {
    if (const auto id = vocabulary.find(token)) stream.ids.push_back(*id);
  });
  return stream;
}

CooccurrenceCounts::CooccurrenceCounts(std::size_t n, std::size_t window,
                                       std::vector<Triplet> triplets)
    : n_(n), window_(window), marginals_(n, 0.0) {
  for (const auto& t : triplets) {
    require(t.row < n && t.column < n, "co-occurrence entry index out of range");
    require(t.value >= 0.0 && std::isfinite(t.value), "co-occurrence entries must be finite and >= 0");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.column < b.column;
  });

  offsets_.assign(n + 1, 0);
  entries_.reserve(triplets.size());
  std::size_t row = 0;
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (!entries_.empty() && k > 0 && triplets[k - 1].row == t.row &&
        triplets[k - 1].column == t.column) {
      entries_.back().value += t.value;
      continue;
    }
    while (row < t.row) offsets_[++row] = entries_.size();
    entries_.push_back({t.column, t.value});
  }
  while (row < n) offsets_[++row] = entries_.size();

  // Drop explicit zeros so that nonzeros() means what it says.
  std::vector<Entry> compact;
  compact.reserve(entries_.size());
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      if (entries_[k].value != 0.0) compact.push_back(entries_[k]);
    }
    offsets[i + 1] = compact.size();
  }
  entries_ = std::move(compact);
  offsets_ = std::move(offsets);

  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (auto it = row_begin(i); it != row_end(i); ++it) {
      sum += it->value;
      require(at(it->column, i) == it->value, "co-occurrence counts must be symmetric");
    }
    marginals_[i] = sum;
    total_ += sum;
  }
}

double CooccurrenceCounts::at(std::size_t i, std::size_t j) const {
  const auto begin = row_begin(i);
  const auto end = row_end(i);
  const auto it = std::lower_bound(begin, end, j, [](const Entry& e, std::size_t column) {
    return e.column < column;
  });
  return (it != end && it->column == j) ? it->value : 0.0;
}

CooccurrenceCounts count_cooccurrences(const TokenStream& stream, std::size_t n,
                                       std::size_t window) {
  require(window >= 1, "window size must be >= 1");
  const auto& ids = stream.ids;
  for (const TokenId id : ids) require(id < n, "token id out of vocabulary range");

  std::vector<CooccurrenceCounts::Triplet> triplets;
  const auto emit = [&](std::size_t i, std::size_t j, double value) {
    triplets.push_back({static_cast<TokenId>(i), static_cast<TokenId>(j), value});
  };

  // Dense accumulation is far faster for the vocabulary sizes we target.
  constexpr std::size_t kDenseLimit = 12000;
  if (n <= kDenseLimit) {
    std::vector<std::uint32_t> dense(n * n, 0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t last = std::min(ids.size(), i + window + 1);
      for (std::size_t j = i + 1; j < last; ++j) {
        ++dense[ids[i] * n + ids[j]];
        ++dense[ids[j] * n + ids[i]];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (const auto c = dense[i * n + j]; c != 0) emit(i, j, c);
      }
    }
  } else {
    std::unordered_map<std::uint64_t, double> sparse;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t last = std::min(ids.size(), i + window + 1);
      for (std::size_t j = i + 1; j < last; ++j) {
        sparse[(std::uint64_t{ids[i]} << 32) | ids[j]] += 1.0;
        sparse[(std::uint64_t{ids[j]} << 32) | ids[i]] += 1.0;
      }
    }
    for (const auto& [key, value] : sparse) emit(key >> 32, key & 0xFFFFFFFFu, value);
  }
  return CooccurrenceCounts(n, window, std::move(triplets));
}

CorpusSplit split_corpus(const TokenStream& stream, std::uint64_t seed,
                         std::size_t chunk_length) {
  require(chunk_length >= 1, "chunk length must be >= 1");
  require(stream.total_tokens() >= 2, "corpus split needs at least 2 tokens");
  const std::size_t chunks = (stream.total_tokens() + chunk_length - 1) / chunk_length;
  if (chunks < 2) {
    fail(ErrorKind::invalid_argument,
         "corpus of " + std::to_string(stream.total_tokens()) +
             " tokens is shorter than 2 chunks of " + std::to_string(chunk_length) +
             "; use a smaller chunk length");
  }

  std::vector<std::size_t> order(chunks);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  CorpusSplit split;
  split.chunk_length = chunk_length;
  const std::size_t first_count = (chunks + 1) / 2;
  split.first_chunks.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first_count));
  split.second_chunks.assign(order.begin() + static_cast<std::ptrdiff_t>(first_count), order.end());
  std::sort(split.first_chunks.begin(), split.first_chunks.end());
  std::sort(split.second_chunks.begin(), split.second_chunks.end());

  const auto gather = [&](const std::vector<std::size_t>& chosen, TokenStream& out) {
    for (const std::size_t c : chosen) {
      const std::size_t begin = c * chunk_length;
      const std::size_t end = std::min(stream.total_tokens(), begin + chunk_length);
      out.ids.insert(out.ids.end(), stream.ids.begin() + static_cast<std::ptrdiff_t>(begin),
                     stream.ids.begin() + static_cast<std::ptrdiff_t>(end));
    }
  };
  gather(split.first_chunks, split.first);
  gather(split.second_chunks, split.second);
  return split;
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocabulary) {
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    out << vocabulary.tokens()[i] << '\t' << vocabulary.counts()[i] << '\n';
  }
}

Vocabulary read_vocabulary(std::istream& in) {
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    std::uint64_t count = 0;
    const char* first = line.data() + (tab == std::string::npos ? 0 : tab + 1);
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, count);
    if (tab == std::string::npos || ec != std::errc() || ptr != last) {
      fail(ErrorKind::io, "vocabulary line " + std::to_string(line_number) +
                              ": expected token<TAB>count");
    }
    tokens.push_back(line.substr(0, tab));
    counts.push_back(count);
  }
  if (tokens.empty()) fail(ErrorKind::io, "empty vocabulary file");
  return Vocabulary(std::move(tokens), std::move(counts));
}

void write_counts(std::ostream& out, const CooccurrenceCounts& counts) {
  out << counts.size() << ' ' << counts.window() << ' ' << counts.nonzeros() << '\n';
  char buffer[64];
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (auto it = counts.row_begin(i); it != counts.row_end(i); ++it) {
      const auto result = std::to_chars(buffer, buffer + sizeof(buffer), it->value);
      out << i << ' ' << it->column << ' ' << std::string_view(buffer, result.ptr - buffer) << '\n';
    }
  }
}

CooccurrenceCounts read_counts(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::io, "counts file: missing header");
  std::istringstream header(line);
  std::size_t n = 0, window = 0, nnz = 0;
  if (!(header >> n >> window >> nnz)) fail(ErrorKind::io, "counts file: malformed header");

  std::vector<CooccurrenceCounts::Triplet> triplets;
  triplets.reserve(nnz);
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::size_t i = 0, j = 0;
    std::string value_text;
    if (!(fields >> i >> j >> value_text)) {
      fail(ErrorKind::io, "counts file line " + std::to_string(line_number) + ": expected `i j value`");
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (ec != std::errc() || i >= n || j >= n) {
      fail(ErrorKind::io, "counts file line " + std::to_string(line_number) + ": bad entry");
    }
    triplets.push_back({static_cast<TokenId>(i), static_cast<TokenId>(j), value});
  }
  if (triplets.size() != nnz) {
    fail(ErrorKind::io, "counts file: header promises " + std::to_string(nnz) + " entries, found " +
                            std::to_string(triplets.size()));
  }
  return CooccurrenceCounts(n, window, std::move(triplets));
}

}  // namespace pipdim
