// pipdim: build signal matrices from a corpus, estimate noise and spectrum,
// select the PIP-loss minimizing dimensionality, train and evaluate
// embeddings.
//
// Exit codes: 0 success, 1 internal error, 2 usage or I/O error, 3 degenerate
// data (for example no signal above the noise floor).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pipdim/corpus.hpp"
#include "pipdim/embed.hpp"
#include "pipdim/error.hpp"
#include "pipdim/estimation.hpp"
#include "pipdim/eval.hpp"
#include "pipdim/matrix_io.hpp"
#include "pipdim/parallel.hpp"
#include "pipdim/perturbation.hpp"
#include "pipdim/selection.hpp"
#include "pipdim/signal.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pipdim;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

struct CorpusOptions {
  std::string corpus;
  std::size_t max_vocab = 10000;
  std::uint64_t min_count = 0;
  std::size_t window = 5;
  std::string matrix = "ppmi";
  double shift = 1.0;
  bool raw_log_count = false;

  SignalSpec spec() const {
    return {signal_kind_from_string(matrix), shift, !raw_log_count};
  }
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& o, bool corpus_required) {
  auto* corpus = cmd->add_option("--corpus", o.corpus, "UTF-8 text corpus")->check(CLI::ExistingFile);
  if (corpus_required) corpus->required();
  cmd->add_option("--max-vocab", o.max_vocab, "keep the most frequent N tokens")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-count", o.min_count, "drop tokens seen fewer times")->capture_default_str();
  cmd->add_option("--window", o.window, "symmetric co-occurrence window")->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--matrix", o.matrix, "signal matrix kind")->capture_default_str()
      ->check(CLI::IsMember({"pmi", "ppmi", "sppmi", "logcount"}));
  cmd->add_option("--shift", o.shift, "SPPMI negative-sampling shift (> 0)")->capture_default_str();
  cmd->add_flag("--raw-log-count", o.raw_log_count, "log-count uses log C instead of log(1 + C)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::io, "failed writing '" + path.string() + "'");
}

void write_json(const std::string& path, const json& document) {
  const std::string text = document.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text(path, text);
  }
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create directory '" + dir + "': " + ec.message());
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device device;
  return (std::uint64_t{device()} << 32) | device();
}

json corpus_params(const CorpusOptions& o) {
  json params;
  params["corpus"] = fs::path(o.corpus).filename().string();
  params["max_vocab"] = o.max_vocab;
  params["min_count"] = o.min_count;
  params["window"] = o.window;
  params["matrix"] = o.matrix;
  if (o.matrix == "sppmi") params["shift"] = o.shift;
  if (o.matrix == "logcount") params["log_count_offset"] = !o.raw_log_count;
  return params;
}

std::vector<double> parse_p_list(const std::string& text) {
  std::vector<double> ps;
  std::stringstream stream(text);
  for (std::string item; std::getline(stream, item, ',');) {
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) fail(ErrorKind::invalid_argument, "bad --p-list entry '" + item + "'");
    ps.push_back(p);
  }
  require(!ps.empty(), "--p-list is empty");
  return ps;
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  CorpusOptions corpus;
  std::string out;
};

int run_build(const BuildArgs& a) {
  const auto spec = a.corpus.spec();
  const std::string text = read_file(a.corpus.corpus);
  const auto tokenized = tokenize(text, {a.corpus.max_vocab, a.corpus.min_count});
  const auto counts = count_cooccurrences(tokenized.stream, tokenized.vocabulary.size(), a.corpus.window);
  const auto signal = build_signal(counts, spec);

  ensure_directory(a.out);
  const fs::path dir(a.out);
  {
    std::ofstream out(dir / "vocab.tsv");
    write_vocabulary(out, tokenized.vocabulary);
  }
  {
    std::ofstream out(dir / "counts.txt");
    write_counts(out, counts);
  }
  save_matrix(dir / "signal.bin", signal.values);

  json provenance;
  provenance["params"] = corpus_params(a.corpus);
  provenance["vocab_size"] = tokenized.vocabulary.size();
  provenance["total_tokens"] = tokenized.stream.total_tokens();
  provenance["counts_digest"] = counts_digest(counts);
  provenance["matrix_digest"] = matrix_digest(signal.values);
  provenance["provenance"] = signal.provenance;
  write_json((dir / "provenance.json").string(), provenance);
  std::cout << matrix_digest(signal.values) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  CorpusOptions corpus;
  std::vector<std::string> halves;
  std::string full;
  std::optional<std::uint64_t> seed;
  std::size_t chunk_length = 1000;
  std::string out;
};

int run_estimate(const EstimateArgs& a) {
  json record;
  NoiseEstimate noise;
  Vector empirical;
  std::size_t n = 0;

  if (!a.halves.empty()) {
    require(!a.full.empty(), "--halves needs --full for the spectrum");
    const Matrix first = load_matrix(a.halves[0]);
    const Matrix second = load_matrix(a.halves[1]);
    const Matrix full = load_matrix(a.full);
    require(full.rows() == first.rows(), "--full and --halves differ in size");
    noise = estimate_noise(first, second);
    empirical = singular_values(full);
    n = static_cast<std::size_t>(full.rows());
    record["params"] = {{"halves", {fs::path(a.halves[0]).filename().string(),
                                    fs::path(a.halves[1]).filename().string()}},
                        {"full", fs::path(a.full).filename().string()}};
  } else {
    require(!a.corpus.corpus.empty(), "estimate needs --corpus or --halves/--full");
    const std::uint64_t seed = resolve_seed(a.seed);
    const auto spec = a.corpus.spec();
    const std::string text = read_file(a.corpus.corpus);
    // The vocabulary is fixed on the whole corpus so both halves index the same rows.
    const auto tokenized = tokenize(text, {a.corpus.max_vocab, a.corpus.min_count});
    n = tokenized.vocabulary.size();
    const auto split = split_corpus(tokenized.stream, seed, a.chunk_length);
    const auto first = build_signal(count_cooccurrences(split.first, n, a.corpus.window), spec);
    const auto second = build_signal(count_cooccurrences(split.second, n, a.corpus.window), spec);
    const auto full = build_signal(count_cooccurrences(tokenized.stream, n, a.corpus.window), spec);
    noise = estimate_noise(first, second);
    empirical = singular_values(full.values);
    json params = corpus_params(a.corpus);
    params["seed"] = seed;
    params["chunk_length"] = a.chunk_length;
    record["params"] = params;
    record["vocab_size"] = n;
  }

  const auto spectrum = estimate_spectrum_usvt({empirical.data(), static_cast<std::size_t>(empirical.size())},
                                               noise.sigma_hat, n);
  std::vector<double> positive(spectrum.lambda_hat.begin(),
                               spectrum.lambda_hat.begin() + static_cast<std::ptrdiff_t>(spectrum.effective_rank));
  record["n"] = n;
  record["sigma_hat"] = noise.sigma_hat;
  record["threshold"] = spectrum.threshold;
  record["effective_rank"] = spectrum.effective_rank;
  record["lambda_hat"] = positive;
  write_json(a.out, record);

  if (spectrum.effective_rank == 0) {
    std::cerr << "pipdim: no signal detected: every singular value is below the noise threshold "
              << spectrum.threshold << "\n";
    return kExitDegenerate;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct SelectArgs {
  std::string estimate;
  std::string spectrum;
  std::optional<double> sigma;
  std::optional<std::size_t> n;
  double alpha = 0.5;
  std::size_t trials = 10;
  std::optional<std::uint64_t> seed;
  std::string p_list = "5,10,20,50";
  std::string method = "mc";
  std::string alpha0_range = "beyond-rank";
  bool mirsky = false;
  std::string out = ".";
};

std::vector<double> read_numbers(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) fail(ErrorKind::io, path + ": bad number '" + token + "'");
    values.push_back(v);
  }
  return values;
}

json curve_json(const PipLossCurve& curve, const SubOptimalIntervals& intervals) {
  json block;
  block["method"] = to_string(curve.method);
  block["k_star"] = intervals.k_star;
  block["degenerate"] = intervals.degenerate;
  json list = json::array();
  for (const auto& i : intervals.intervals) {
    list.push_back({{"p", i.p}, {"k_lo", i.k_lo}, {"k_hi", i.k_hi}, {"contiguous", i.contiguous}});
  }
  block["intervals"] = list;
  if (curve.method == CurveMethod::monte_carlo) {
    block["trials"] = curve.trials;
    block["seed"] = curve.seed;
  }
  block["curve"] = curve.losses;
  if (curve.standard_errors) block["stderr"] = *curve.standard_errors;
  return block;
}

void write_curve_csv(const fs::path& path, const PipLossCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "k,loss,stderr\n";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    out << k + 1 << ',' << curve.losses[k] << ',';
    if (curve.standard_errors) out << (*curve.standard_errors)[k];
    out << '\n';
  }
  write_text(path, out.str());
}

int run_select(const SelectArgs& a) {
  std::vector<double> spectrum;
  std::optional<double> sigma = a.sigma;
  std::optional<std::size_t> n = a.n;
  if (!a.estimate.empty()) {
    json record;
    try {
      record = json::parse(read_file(a.estimate));
      spectrum = record.at("lambda_hat").get<std::vector<double>>();
      if (!sigma) sigma = record.at("sigma_hat").get<double>();
      if (!n) n = record.at("n").get<std::size_t>();
    } catch (const json::exception& e) {
      fail(ErrorKind::io, a.estimate + ": not an estimate record (" + e.what() + ")");
    }
  } else {
    require(!a.spectrum.empty(), "select-dim needs --estimate or --spectrum");
    spectrum = read_numbers(a.spectrum);
  }
  require(sigma.has_value(), "--sigma is required with --spectrum");
  require(n.has_value(), "--n is required with --spectrum");
  require(!spectrum.empty(), "the spectrum is empty");

  const auto p_list = parse_p_list(a.p_list);
  const std::uint64_t seed = resolve_seed(a.seed);

  BoundOptions bound_options;
  bound_options.alpha0_range = a.alpha0_range == "beyond-k" ? Alpha0Range::beyond_k : Alpha0Range::beyond_rank;
  bound_options.mirsky_tightening = a.mirsky;

  std::vector<PipLossCurve> curves;
  if (a.method == "mc" || a.method == "both") {
    curves.push_back(monte_carlo_pip_curve(spectrum, *sigma, a.alpha, *n, {a.trials, seed, true}));
  }
  if (a.method == "theorem3" || a.method == "both") {
    curves.push_back(theorem3_curve(spectrum, *sigma, a.alpha, *n, bound_options));
  }

  ensure_directory(a.out);
  json result;
  result["alpha"] = a.alpha;
  result["sigma"] = *sigma;
  result["n"] = *n;
  result["d"] = curves.front().size();
  result["spectrum_digest"] = curves.front().spectrum_digest;
  json methods = json::object();
  for (const auto& curve : curves) {
    const auto intervals = suboptimal_intervals(curve, p_list);
    if (!result.contains("k_star")) {
      result["k_star"] = intervals.k_star;
      result["method"] = to_string(curve.method);
    }
    methods[to_string(curve.method)] = curve_json(curve, intervals);
    write_curve_csv(fs::path(a.out) / ("curve_" + to_string(curve.method) + ".csv"), curve);
  }
  result["results"] = methods;
  write_json((fs::path(a.out) / "selection.json").string(), result);
  std::cout << result["k_star"].get<std::size_t>() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  CorpusOptions corpus;
  std::string signal;
  std::string vocab;
  std::size_t k = 0;
  double alpha = 0.5;
  std::string out;
};

int run_train(const TrainArgs& a) {
  Matrix values;
  std::vector<std::string> tokens;
  if (!a.signal.empty()) {
    require(!a.vocab.empty(), "--signal needs --vocab");
    values = load_matrix(a.signal);
    std::ifstream in(a.vocab);
    if (!in) fail(ErrorKind::io, "cannot open '" + a.vocab + "'");
    tokens = read_vocabulary(in).tokens();
    require(static_cast<Eigen::Index>(tokens.size()) == values.rows(),
            "vocabulary size " + std::to_string(tokens.size()) + " does not match matrix size " +
                std::to_string(values.rows()));
  } else {
    require(!a.corpus.corpus.empty(), "train needs --corpus or --signal/--vocab");
    const auto tokenized = tokenize(read_file(a.corpus.corpus), {a.corpus.max_vocab, a.corpus.min_count});
    const auto counts = count_cooccurrences(tokenized.stream, tokenized.vocabulary.size(), a.corpus.window);
    values = build_signal(counts, a.corpus.spec()).values;
    tokens = tokenized.vocabulary.tokens();
  }
  const auto embedding = factorize_embedding(values, a.k, a.alpha);
  if (!embedding.note.empty()) std::cerr << "pipdim: " << embedding.note << "\n";
  export_embedding(a.out, tokens, embedding.values);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string embedding;
  std::vector<std::string> relatedness;
  std::vector<std::string> analogy;
  bool pearson = false;
  bool cos_mul = false;
  std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
  require(!a.relatedness.empty() || !a.analogy.empty(), "evaluate needs --relatedness or --analogy");
  const auto loaded = import_embedding(a.embedding);
  const Matrix& E = loaded.embedding.values;

  json result;
  result["embedding"] = fs::path(a.embedding).filename().string();
  result["rows"] = E.rows();
  result["dimension"] = E.cols();
  json rel = json::array();
  for (const auto& path : a.relatedness) {
    const auto test = load_relatedness(path);
    const auto r = relatedness_correlation(E, loaded.tokens, test,
                                           a.pearson ? Correlation::pearson : Correlation::spearman);
    rel.push_back({{"test", fs::path(path).filename().string()},
                   {"correlation", a.pearson ? "pearson" : "spearman"},
                   {"value", r.correlation},
                   {"coverage", r.coverage},
                   {"covered", r.covered},
                   {"total", r.total},
                   {"zero_norm_pairs", r.zero_norm_pairs}});
  }
  json ana = json::array();
  for (const auto& path : a.analogy) {
    const auto test = load_analogies(path);
    const auto r = analogy_accuracy(E, loaded.tokens, test,
                                    a.cos_mul ? kernels::AnalogyRule::cos_mul : kernels::AnalogyRule::cos_add);
    ana.push_back({{"test", fs::path(path).filename().string()},
                   {"rule", a.cos_mul ? "3cosmul" : "3cosadd"},
                   {"accuracy", r.accuracy},
                   {"coverage", r.coverage},
                   {"correct", r.correct},
                   {"covered", r.covered},
                   {"total", r.total}});
  }
  if (!rel.empty()) result["relatedness"] = rel;
  if (!ana.empty()) result["analogy"] = ana;
  write_json(a.out, result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Select word-embedding dimensionality by minimizing PIP loss", "pipdim"};
  app.set_config("--config", "", "key=value config file; command-line flags win");
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "count co-occurrences and write the signal matrix");
  add_corpus_options(build_cmd, build.corpus, true);
  build_cmd->add_option("--out", build.out, "output directory")->required();

  EstimateArgs estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "estimate the noise level and the clean spectrum");
  add_corpus_options(estimate_cmd, estimate.corpus, false);
  estimate_cmd->add_option("--halves", estimate.halves, "two matrix files built from independent halves")
      ->expected(2)->check(CLI::ExistingFile);
  estimate_cmd->add_option("--full", estimate.full, "matrix file built from the whole corpus")
      ->check(CLI::ExistingFile);
  estimate_cmd->add_option("--seed", estimate.seed, "seed for the corpus split");
  estimate_cmd->add_option("--chunk-length", estimate.chunk_length, "tokens per split chunk")
      ->capture_default_str()->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--out", estimate.out, "output JSON (default stdout)");

  SelectArgs select;
  auto* select_cmd = app.add_subcommand("select-dim", "compute the PIP loss curve and select k");
  select_cmd->add_option("--estimate", select.estimate, "JSON written by `estimate`")->check(CLI::ExistingFile);
  select_cmd->add_option("--spectrum", select.spectrum, "whitespace-separated spectrum")->check(CLI::ExistingFile);
  select_cmd->add_option("--sigma", select.sigma, "noise level (overrides the estimate)")
      ->check(CLI::NonNegativeNumber);
  select_cmd->add_option("--n", select.n, "vocabulary size (overrides the estimate)")->check(CLI::PositiveNumber);
  select_cmd->add_option("--alpha", select.alpha, "exponent alpha in [0, 1]")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  select_cmd->add_option("--trials", select.trials, "Monte-Carlo trials")->capture_default_str()
      ->check(CLI::PositiveNumber);
  select_cmd->add_option("--seed", select.seed, "Monte-Carlo seed (random and recorded if absent)");
  select_cmd->add_option("--p-list", select.p_list, "comma-separated interval percentages")->capture_default_str();
  select_cmd->add_option("--method", select.method, "curve method")->capture_default_str()
      ->check(CLI::IsMember({"mc", "theorem3", "both"}));
  select_cmd->add_option("--alpha0-range", select.alpha0_range, "alpha = 0 variance sum range")
      ->capture_default_str()->check(CLI::IsMember({"beyond-rank", "beyond-k"}));
  select_cmd->add_flag("--mirsky", select.mirsky, "use k*sigma as the magnitude term at alpha = 0.5");
  select_cmd->add_option("--out", select.out, "output directory")->capture_default_str();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "factorize a signal matrix into an embedding");
  add_corpus_options(train_cmd, train.corpus, false);
  train_cmd->add_option("--signal", train.signal, "matrix file written by `build`")->check(CLI::ExistingFile);
  train_cmd->add_option("--vocab", train.vocab, "vocab.tsv written by `build`")->check(CLI::ExistingFile);
  train_cmd->add_option("--k", train.k, "dimensionality")->required()->check(CLI::PositiveNumber);
  train_cmd->add_option("--alpha", train.alpha, "exponent alpha in [0, 1]")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--out", train.out, "embedding text file")->required();

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score an embedding on relatedness and analogy sets");
  evaluate_cmd->add_option("--embedding", evaluate.embedding, "embedding text file")->required()
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--relatedness", evaluate.relatedness, "word1<TAB>word2<TAB>score files")
      ->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--analogy", evaluate.analogy, "Google-format analogy files")->check(CLI::ExistingFile);
  evaluate_cmd->add_flag("--pearson", evaluate.pearson, "Pearson instead of Spearman correlation");
  evaluate_cmd->add_flag("--cos-mul", evaluate.cos_mul, "3CosMul instead of 3CosAdd");
  evaluate_cmd->add_option("--out", evaluate.out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    configure_threads_from_env();
    if (build_cmd->parsed()) return run_build(build);
    if (estimate_cmd->parsed()) return run_estimate(estimate);
    if (select_cmd->parsed()) return run_select(select);
    if (train_cmd->parsed()) return run_train(train);
    if (evaluate_cmd->parsed()) return run_evaluate(evaluate);
  } catch (const Error& e) {
    std::cerr << "pipdim: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::invalid_argument:
      case ErrorKind::io: return kExitUsage;
      case ErrorKind::degenerate: return kExitDegenerate;
      case ErrorKind::numerical: return kExitInternal;
    }
  } catch (const std::exception& e) {
    std::cerr << "pipdim: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
