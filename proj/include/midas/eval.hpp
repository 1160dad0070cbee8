#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "midas/ingest.hpp"
#include "midas/scorer.hpp"

namespace midas {

/// Probability that a random positive outscores a random negative, ties
/// counted one half. labels are 0/1. Throws EvaluationError on length mismatch
/// or when either class is empty.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Mean precision at the rank of each positive, ranking by descending score
/// with ties kept in input order.
double average_precision(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Per-edge latency counts, bucketed at 1us and 2us.
struct LatencyHistogram {
  std::uint64_t at_most_1us = 0;
  std::uint64_t at_most_2us = 0;
  std::uint64_t above_2us = 0;
};

struct Throughput {
  std::uint64_t edges = 0;
  double wall_clock_seconds = 0.0;
  double edges_per_second = 0.0;
  LatencyHistogram latency;
};

struct MetricsReport {
  std::optional<double> auc;
  std::optional<double> average_precision;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  std::optional<Throughput> throughput;

  std::string to_json() const;
  std::string to_text() const;
};

/// Fills auc, average precision and class counts.
MetricsReport evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Times a fresh scorer over preloaded edges. The first pass measures total
/// wall-clock time; a second pass on another fresh scorer times each edge for
/// the latency histogram. With latency = false only the first pass runs.
Throughput benchmark(const ScorerConfig& config, std::span<const Edge> edges, bool latency = true);

/// A microcluster: for `duration` ticks starting at `start_tick`, `edges_per_tick`
/// edges drawn uniformly from a sources x destinations node block.
struct BurstSpec {
  std::uint64_t start_tick = 30;
  std::uint64_t duration = 10;
  std::size_t sources = 3;
  std::size_t destinations = 3;
  std::uint64_t edges_per_tick = 100000;
};

struct SynthConfig {
  std::size_t nodes = 100;
  double baseline_rate = 10000.0;  // Poisson mean of background edges per tick
  std::uint64_t ticks = 50;
  std::vector<BurstSpec> bursts = {BurstSpec{}};
  std::uint64_t seed = 0;

  /// Throws ParameterError when a count is zero or a burst leaves [1, ticks].
  void validate() const;
};

/// Labeled synthetic stream over ticks 1..ticks. Background edges pick source
/// and destination uniformly among nodes "n0".."n<nodes-1>" and carry label 0;
/// burst edges carry label 1. Edges inside a tick are shuffled. Deterministic
/// for a given config.
std::vector<Edge> generate_synthetic(const SynthConfig& config);

/// Reads one score per line. Lines with several comma-separated fields
/// (u,v,t,score) contribute their last field.
std::vector<double> read_scores(std::istream& in);

/// Reads 0/1 labels. Single-field lines are taken as labels directly; other
/// lines are parsed as edges with format and must carry a label column.
std::vector<std::uint8_t> read_labels(std::istream& in, const StreamFormat& format);

}  // namespace midas
