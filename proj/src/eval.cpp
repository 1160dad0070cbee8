#include "midas/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "midas/errors.hpp"

namespace midas {
namespace {

void check_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw EvaluationError("score count " + std::to_string(scores.size()) +
                          " does not match label count " + std::to_string(labels.size()));
  }
  std::size_t pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw EvaluationError("score " + std::to_string(i) + " is NaN");
    if (labels[i] > 1) throw EvaluationError("labels must be 0 or 1");
    pos += labels[i];
  }
  if (pos == 0 || pos == labels.size()) {
    throw EvaluationError("need at least one positive and one negative label");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the Mann-Whitney U, kept integral so ties stay exact.
  std::uint64_t twice_u = 0;
  std::uint64_t negatives_below = 0;
  std::uint64_t positives = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::uint64_t p = 0, n = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] ? p : n) += 1;
      ++j;
    }
    twice_u += p * (2 * negatives_below + n);
    negatives_below += n;
    positives += p;
    i = j;
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives_below));
}

double average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check_inputs(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double sum = 0.0;
  std::uint64_t hits = 0;
  for (std::size_t rank = 1; rank <= order.size(); ++rank) {
    if (!labels[order[rank - 1]]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(rank);
  }
  return sum / static_cast<double>(hits);
}

MetricsReport evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  MetricsReport r;
  r.auc = roc_auc(scores, labels);
  r.average_precision = average_precision(scores, labels);
  r.positives = static_cast<std::uint64_t>(std::count(labels.begin(), labels.end(), 1));
  r.negatives = labels.size() - r.positives;
  return r;
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  if (auc) j["auc"] = *auc;
  if (average_precision) j["average_precision"] = *average_precision;
  j["positives"] = positives;
  j["negatives"] = negatives;
  if (throughput) {
    j["edges"] = throughput->edges;
    j["wall_clock_seconds"] = throughput->wall_clock_seconds;
    j["edges_per_second"] = throughput->edges_per_second;
    j["latency_histogram"] = {{"le_1us", throughput->latency.at_most_1us},
                              {"le_2us", throughput->latency.at_most_2us},
                              {"gt_2us", throughput->latency.above_2us}};
  }
  return j.dump(2);
}

std::string MetricsReport::to_text() const {
  std::ostringstream os;
  if (auc) os << "auc                 " << *auc << '\n';
  if (average_precision) os << "average_precision   " << *average_precision << '\n';
  if (auc || average_precision) {
    os << "positives           " << positives << '\n';
    os << "negatives           " << negatives << '\n';
  }
  if (throughput) {
    os << "edges               " << throughput->edges << '\n';
    os << "wall_clock_seconds  " << throughput->wall_clock_seconds << '\n';
    os << "edges_per_second    " << throughput->edges_per_second << '\n';
    os << "latency <=1us       " << throughput->latency.at_most_1us << '\n';
    os << "latency <=2us       " << throughput->latency.at_most_2us << '\n';
    os << "latency >2us        " << throughput->latency.above_2us << '\n';
  }
  return os.str();
}

Throughput benchmark(const ScorerConfig& config, std::span<const Edge> edges, bool latency) {
  using Clock = std::chrono::steady_clock;
  Throughput out;
  out.edges = edges.size();
  if (edges.empty()) return out;

  {
    auto scorer = make_scorer(config);
    double sink = 0.0;
    const auto start = Clock::now();
    for (const Edge& e : edges) sink += scorer->process(e.source, e.destination, e.tick).score;
    const auto stop = Clock::now();
    out.wall_clock_seconds = std::chrono::duration<double>(stop - start).count();
    // Keeps the loop observable.
    if (std::isnan(sink)) out.wall_clock_seconds = -1.0;
  }
  out.edges_per_second =
      out.wall_clock_seconds > 0.0 ? static_cast<double>(out.edges) / out.wall_clock_seconds : 0.0;

  if (latency) {
    auto scorer = make_scorer(config);
    for (const Edge& e : edges) {
      const auto start = Clock::now();
      scorer->process(e.source, e.destination, e.tick);
      const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
      if (ns <= 1000) {
        ++out.latency.at_most_1us;
      } else if (ns <= 2000) {
        ++out.latency.at_most_2us;
      } else {
        ++out.latency.above_2us;
      }
    }
  }
  return out;
}

void SynthConfig::validate() const {
  if (nodes == 0) throw ParameterError("synthetic graph needs at least one node");
  if (!(baseline_rate > 0.0)) throw ParameterError("baseline rate must be positive");
  if (ticks == 0) throw ParameterError("tick count must be positive");
  for (const BurstSpec& b : bursts) {
    if (b.duration == 0 || b.sources == 0 || b.destinations == 0 || b.edges_per_tick == 0) {
      throw ParameterError("burst counts must be positive");
    }
    if (b.start_tick < 1 || b.start_tick + b.duration - 1 > ticks) {
      throw ParameterError("burst window must lie inside [1, ticks]");
    }
    if (b.sources > nodes || b.destinations > nodes) {
      throw ParameterError("burst node block larger than the node set");
    }
  }
}

std::vector<Edge> generate_synthetic(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, config.nodes - 1);
  std::poisson_distribution<std::uint64_t> volume(config.baseline_rate);
  const auto name = [](std::size_t i) { return "n" + std::to_string(i); };

  std::vector<std::size_t> pool(config.nodes);
  std::iota(pool.begin(), pool.end(), 0);
  struct Block {
    std::vector<std::size_t> sources, destinations;
  };
  std::vector<Block> blocks;
  for (const BurstSpec& b : config.bursts) {
    Block blk;
    std::shuffle(pool.begin(), pool.end(), rng);
    blk.sources.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(b.sources));
    std::shuffle(pool.begin(), pool.end(), rng);
    blk.destinations.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(b.destinations));
    blocks.push_back(std::move(blk));
  }

  std::vector<Edge> out;
  std::vector<Edge> tick_edges;
  for (std::uint64_t t = 1; t <= config.ticks; ++t) {
    tick_edges.clear();
    const std::uint64_t n = volume(rng);
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::size_t u = pick(rng);
      const std::size_t v = pick(rng);
      tick_edges.push_back(Edge{name(u), name(v), t, false});
    }
    for (std::size_t k = 0; k < config.bursts.size(); ++k) {
      const BurstSpec& b = config.bursts[k];
      if (t < b.start_tick || t >= b.start_tick + b.duration) continue;
      std::uniform_int_distribution<std::size_t> ps(0, b.sources - 1), pd(0, b.destinations - 1);
      for (std::uint64_t i = 0; i < b.edges_per_tick; ++i) {
        tick_edges.push_back(
            Edge{name(blocks[k].sources[ps(rng)]), name(blocks[k].destinations[pd(rng)]), t, true});
      }
    }
    std::shuffle(tick_edges.begin(), tick_edges.end(), rng);
    std::move(tick_edges.begin(), tick_edges.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<double> read_scores(std::istream& in) {
  std::vector<double> scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const std::size_t comma = body.rfind(',');
    if (comma != std::string_view::npos) body = trim(body.substr(comma + 1));
    try {
      std::size_t used = 0;
      const std::string field(body);
      const double v = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument("trailing characters");
      scores.push_back(v);
    } catch (const std::exception&) {
      throw ParseError("score '" + std::string(body) + "' is not a number", line_no);
    }
  }
  if (in.bad()) throw IoError("read failure in score input");
  return scores;
}

std::vector<std::uint8_t> read_labels(std::istream& in, const StreamFormat& format) {
  std::vector<std::uint8_t> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body.find(format.delimiter) == std::string_view::npos) {
      if (body == "0" || body == "1") {
        labels.push_back(body == "1");
        continue;
      }
      throw ParseError("label '" + std::string(body) + "' is not 0 or 1", line_no);
    }
    const Edge e = parse_line(line, format, line_no);
    if (!e.label) throw ParseError("record has no label", line_no);
    labels.push_back(*e.label);
    if (format.undirected) labels.push_back(*e.label);
  }
  if (in.bad()) throw IoError("read failure in label input");
  return labels;
}

}  // namespace midas
