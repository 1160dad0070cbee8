#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "midas/detector.hpp"
#include "midas/errors.hpp"
#include "midas/eval.hpp"
#include "midas/ingest.hpp"
#include "midas/scorer.hpp"
#include "midas/sketch.hpp"

namespace midas::cli {
namespace {

struct Options {
  std::string variant = "midas";
  std::size_t rows = 2;
  std::size_t buckets = 2719;
  double nu = 0.001;
  double epsilon = 0.05;
  double alpha = 0.5;
  std::string combiner = "max";
  std::uint64_t seed = 0;

  bool undirected = false;
  std::string delimiter = ",";
  std::string columns = "src,dst,tick,label";
  std::uint64_t tick_width = 1;
  std::string on_disorder = "error";

  std::string input = "-";
  std::string output = "-";
  std::string format;

  std::string scores;
  std::string labels;

  std::size_t nodes = 100;
  double rate = 10000.0;
  std::uint64_t ticks = 50;
  std::vector<std::string> bursts;
  bool no_burst = false;

  bool no_latency = false;

  CLI::Option* rows_opt = nullptr;
  CLI::Option* buckets_opt = nullptr;
  CLI::Option* nu_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
};

/// Usage problems detected after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void add_scorer_options(CLI::App& app, Options& o) {
  app.add_option("--variant", o.variant, "Scorer variant")
      ->check(CLI::IsMember({"midas", "midas-r"}))
      ->capture_default_str();
  app.add_option("--rows", o.rows, "Sketch hash rows")->capture_default_str();
  app.add_option("--buckets", o.buckets, "Sketch buckets per row")->capture_default_str();
  app.add_option("--nu", o.nu, "Sketch approximation error; sizes buckets as ceil(e/nu)")
      ->capture_default_str();
  app.add_option("--alpha", o.alpha, "Per-tick decay for midas-r")->capture_default_str();
  app.add_option("--combiner", o.combiner, "Edge/node score combination for midas-r")
      ->check(CLI::IsMember({"max", "sum"}))
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Hash seed")->capture_default_str();
}

void add_format_options(CLI::App& app, Options& o) {
  app.add_flag("--undirected", o.undirected, "Expand each record into both directions");
  app.add_option("--delimiter", o.delimiter, "Field delimiter (one character, or 'tab')")
      ->capture_default_str();
  app.add_option("--columns", o.columns, "Column order, e.g. src,dst,tick,label")
      ->capture_default_str();
  app.add_option("--tick-width", o.tick_width, "Divide raw ticks by this width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--on-disorder", o.on_disorder, "Decreasing tick handling")
      ->check(CLI::IsMember({"error", "skip"}))
      ->capture_default_str();
}

StreamFormat stream_format(const Options& o) {
  StreamFormat f;
  if (o.delimiter == "tab" || o.delimiter == "\\t") {
    f.delimiter = '\t';
  } else if (o.delimiter.size() == 1) {
    f.delimiter = o.delimiter[0];
  } else {
    throw UsageError("--delimiter must be a single character");
  }
  f.columns = parse_columns(o.columns);
  f.undirected = o.undirected;
  f.tick_width = o.tick_width;
  f.on_disorder = o.on_disorder == "skip" ? OrderPolicy::kSkip : OrderPolicy::kError;
  return f;
}

SketchParams sketch_params(const Options& o) {
  SketchParams p;
  p.rows = o.rows;
  p.buckets = o.buckets;
  p.seed = o.seed;
  // Explicit --rows/--buckets win over sizing derived from --nu/--epsilon.
  if (o.nu_opt->count() > 0 && o.buckets_opt->count() == 0) {
    const bool has_epsilon = o.epsilon_opt->count() > 0;
    const SketchParams derived = params_for(o.nu, has_epsilon ? o.epsilon : 0.5, o.seed);
    p.buckets = derived.buckets;
    if (o.rows_opt->count() == 0 && has_epsilon) p.rows = derived.rows;
  }
  if (p.rows < 1 || p.buckets < 1) throw UsageError("--rows and --buckets must be at least 1");
  return p;
}

ScorerConfig scorer_config(const Options& o) {
  ScorerConfig c;
  c.variant = o.variant == "midas-r" ? Variant::kMidasR : Variant::kMidas;
  c.sketch = sketch_params(o);
  c.alpha = o.alpha;
  c.combiner = o.combiner == "sum" ? Combiner::kSum : Combiner::kMax;
  if (c.variant == Variant::kMidasR && !(c.alpha > 0.0 && c.alpha < 1.0)) {
    throw UsageError("--alpha must lie in (0, 1)");
  }
  return c;
}

/// Input stream: the caller's stdin for "-", otherwise an owned file.
class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw IoError("cannot open input '" + path + "'");
    stream_ = file_.get();
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw IoError("cannot open output '" + path + "'");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw IoError("write failure");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

void run_scoring(const Options& o, bool detect, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  const std::string fmt = o.format.empty() ? "csv" : o.format;
  if (fmt != "csv" && fmt != "json") throw UsageError("--format must be csv or json");
  const ScorerConfig config = scorer_config(o);
  std::optional<DetectorConfig> detector;
  if (detect) {
    try {
      detector.emplace(o.epsilon, o.nu);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
  }
  const StreamFormat format = stream_format(o);

  Input input(o.input, in);
  Output output(o.output, out);
  EdgeReader reader(input.get(), format, [&err](const std::string& m) { err << "warning: " << m << '\n'; });
  auto scorer = make_scorer(config);

  std::string line;
  while (auto edge = reader.next()) {
    const ScoreResult r = scorer->process(edge->source, edge->destination, edge->tick);
    std::optional<AdjustedStatistic> adj;
    bool decision = false;
    if (detector) {
      adj = adjusted_statistic(r.counts.current, r.counts.total, r.counts.t, r.counts.tick_edges,
                               detector->nu());
      decision = decide(*adj, *detector);
    }
    if (fmt == "csv") {
      line.clear();
      line += edge->source;
      line += format.delimiter;
      line += edge->destination;
      line += format.delimiter;
      line += std::to_string(edge->tick);
      line += format.delimiter;
      line += format_double(r.score);
      if (adj) {
        line += format.delimiter;
        line += format_double(adj->value);
        line += format.delimiter;
        line += decision ? '1' : '0';
      }
      line += '\n';
      output.get() << line;
    } else {
      nlohmann::ordered_json j;
      j["u"] = edge->source;
      j["v"] = edge->destination;
      j["t"] = edge->tick;
      j["score"] = r.score;
      if (adj) {
        j["adjusted"] = adj->value;
        j["decision"] = decision ? 1 : 0;
      }
      output.get() << j.dump() << '\n';
    }
  }
  output.finish();
}

void write_report(const MetricsReport& report, const std::string& format, Output& output) {
  const std::string fmt = format.empty() ? "json" : format;
  if (fmt == "json") {
    output.get() << report.to_json() << '\n';
  } else if (fmt == "text") {
    output.get() << report.to_text();
  } else {
    throw UsageError("--format must be json or text");
  }
  output.finish();
}

void run_eval(const Options& o, std::istream& in, std::ostream& out) {
  if (o.scores.empty() || o.labels.empty()) throw UsageError("eval needs --scores and --labels");
  if (o.scores == "-" && o.labels == "-") throw UsageError("only one of --scores/--labels may be '-'");
  const StreamFormat format = stream_format(o);
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
  {
    Input s(o.scores, in);
    scores = read_scores(s.get());
  }
  {
    Input l(o.labels, in);
    labels = read_labels(l.get(), format);
  }
  const MetricsReport report = evaluate(scores, labels);
  Output output(o.output, out);
  write_report(report, o.format, output);
}

BurstSpec parse_burst(const std::string& spec) {
  // start:duration:sources:destinations:edges_per_tick
  std::vector<std::uint64_t> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw UsageError("bad --burst '" + spec + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() != 5) {
    throw UsageError("--burst expects start:duration:sources:destinations:edges_per_tick");
  }
  return BurstSpec{parts[0], parts[1], parts[2], parts[3], parts[4]};
}

void run_synth(const Options& o, std::ostream& out) {
  SynthConfig config;
  config.nodes = o.nodes;
  config.baseline_rate = o.rate;
  config.ticks = o.ticks;
  config.seed = o.seed;
  if (o.no_burst || !o.bursts.empty()) config.bursts.clear();
  for (const auto& b : o.bursts) config.bursts.push_back(parse_burst(b));
  try {
    config.validate();
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  const std::vector<Edge> edges = generate_synthetic(config);
  Output output(o.output, out);
  StreamFormat format;
  std::string line;
  for (const Edge& e : edges) {
    line = serialize_edge(e, format);
    line += '\n';
    output.get() << line;
  }
  output.finish();
}

void run_bench(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const ScorerConfig config = scorer_config(o);
  const StreamFormat format = stream_format(o);
  std::vector<Edge> edges;
  {
    Input input(o.input, in);
    EdgeReader reader(input.get(), format, [&err](const std::string& m) { err << "warning: " << m << '\n'; });
    while (auto e = reader.next()) edges.push_back(std::move(*e));
  }
  MetricsReport report;
  report.throughput = benchmark(config, edges, !o.no_latency);
  Output output(o.output, out);
  write_report(report, o.format, output);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Streaming microcluster anomaly scoring for edge streams"};
  app.require_subcommand(1);
  Options o;

  auto* score = app.add_subcommand("score", "Score every edge (u,v,t,score)");
  auto* detect = app.add_subcommand("detect", "Score and flag edges at false-positive level epsilon");
  auto* eval = app.add_subcommand("eval", "AUC and average precision of a score file");
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic stream");
  auto* bench = app.add_subcommand("bench", "Throughput over a preloaded edge file");

  for (CLI::App* sub : {score, detect, bench}) {
    add_scorer_options(*sub, o);
    add_format_options(*sub, o);
    sub->add_option("--input", o.input, "Edge file ('-' for stdin)")->capture_default_str();
    sub->add_option("--output", o.output, "Output file ('-' for stdout)")->capture_default_str();
  }
  score->add_option("--format", o.format, "csv or json");
  detect->add_option("--format", o.format, "csv or json");
  bench->add_option("--format", o.format, "json or text");
  bench->add_flag("--no-latency", o.no_latency, "Skip the per-edge latency pass");
  detect->add_option("--epsilon", o.epsilon, "Target false-positive probability")->required();
  // --epsilon only sizes the sketch outside detect; it has no other effect there.
  score->add_option("--epsilon", o.epsilon, "Sketch failure probability for --nu sizing");
  bench->add_option("--epsilon", o.epsilon, "Sketch failure probability for --nu sizing");

  add_format_options(*eval, o);
  eval->add_option("--scores", o.scores, "Score file (one value per line or u,v,t,score)")->required();
  eval->add_option("--labels", o.labels, "Label file (0/1 per line) or labeled edge file")->required();
  eval->add_option("--output", o.output, "Output file ('-' for stdout)")->capture_default_str();
  eval->add_option("--format", o.format, "json or text");

  synth->add_option("--nodes", o.nodes, "Node count")->capture_default_str();
  synth->add_option("--rate", o.rate, "Poisson mean of background edges per tick")->capture_default_str();
  synth->add_option("--ticks", o.ticks, "Number of ticks")->capture_default_str();
  synth->add_option("--burst", o.bursts, "start:duration:sources:destinations:edges_per_tick (repeatable)");
  synth->add_flag("--no-burst", o.no_burst, "Generate background traffic only");
  synth->add_option("--seed", o.seed, "Generator seed")->capture_default_str();
  synth->add_option("--output", o.output, "Output file ('-' for stdout)")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  // Sizing flags are registered once per subcommand; look them up on the one that ran.
  CLI::App* active = app.get_subcommands().front();
  if (active != eval && active != synth) {
    o.epsilon_opt = active->get_option("--epsilon");
    o.rows_opt = active->get_option("--rows");
    o.buckets_opt = active->get_option("--buckets");
    o.nu_opt = active->get_option("--nu");
  }

  try {
    if (active == score) run_scoring(o, false, in, out, err);
    if (active == detect) run_scoring(o, true, in, out, err);
    if (active == eval) run_eval(o, in, out);
    if (active == synth) run_synth(o, out);
    if (active == bench) run_bench(o, in, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const StreamOrderError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace midas::cli
