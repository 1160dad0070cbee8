#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "midas/sketch.hpp"

namespace midas {

/// One stream event. Ticks are nondecreasing along a stream.
struct Edge {
  std::string source;
  std::string destination;
  std::uint64_t tick = 0;
  std::optional<bool> label;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct ScoredEdge {
  Edge edge;
  double score = 0.0;
  std::optional<bool> decision;
};

/// Chi-squared burst statistic for a key seen `current` times in tick t and
/// `total` times overall: (current - total/t)^2 * t^2 / (total * (t - 1)).
/// Returns 0 when t == 1 or total == 0. Throws ParameterError for t < 1.
double chi2_score(double current, double total, std::uint64_t t);

/// Sketch estimates behind an edge's score, as needed by the detector.
struct EdgeCounts {
  double current = 0.0;        // a-hat for the edge key
  double total = 0.0;          // s-hat for the edge key
  std::uint64_t t = 1;         // tick used in the statistic
  std::uint64_t tick_edges = 0;  // N_t, edges seen so far in this tick
};

struct ScoreResult {
  double score = 0.0;
  double edge_score = 0.0;
  double source_score = 0.0;
  double destination_score = 0.0;
  EdgeCounts counts;
};

enum class Variant { kMidas, kMidasR };
enum class Combiner { kMax, kSum };

struct ScorerConfig {
  Variant variant = Variant::kMidas;
  SketchParams sketch;
  double alpha = 0.5;
  Combiner combiner = Combiner::kMax;
};

/// Common streaming interface over both scorer variants. A scorer is a single
/// writer: calls to process() must be totally ordered.
class EdgeScorer {
 public:
  virtual ~EdgeScorer() = default;

  /// Scores one edge. Throws StreamOrderError if tick is below the current tick.
  virtual ScoreResult process(std::string_view source, std::string_view destination,
                              std::uint64_t tick) = 0;

  /// Moves to a later tick without scoring an edge. Throws ParameterError
  /// unless new_tick > current_tick().
  virtual void advance_to(std::uint64_t new_tick) = 0;

  ScoredEdge process(const Edge& edge) {
    const ScoreResult r = process(edge.source, edge.destination, edge.tick);
    return ScoredEdge{edge, r.score, std::nullopt};
  }

  std::uint64_t current_tick() const noexcept { return current_tick_; }
  std::uint64_t tick_edge_total() const noexcept { return tick_edges_; }
  std::uint64_t stream_edge_total() const noexcept { return stream_edges_; }

  /// Total update/query cell touches over all sketches.
  virtual std::uint64_t cell_touches() const noexcept = 0;

 protected:
  void check_order(std::uint64_t tick) const;

  std::uint64_t current_tick_ = 0;
  std::uint64_t tick_edges_ = 0;
  std::uint64_t stream_edges_ = 0;
};

/// Edge-count scoring with the current-tick sketch cleared at every tick change.
class MidasScorer final : public EdgeScorer {
 public:
  explicit MidasScorer(const SketchParams& params);

  using EdgeScorer::process;
  ScoreResult process(std::string_view source, std::string_view destination,
                      std::uint64_t tick) override;
  void advance_to(std::uint64_t new_tick) override;
  std::uint64_t cell_touches() const noexcept override;

  const CountMinSketch& total_edges() const noexcept { return total_; }
  const CountMinSketch& current_edges() const noexcept { return current_; }

 private:
  CountMinSketch total_;
  CountMinSketch current_;
};

/// Edge and node scoring where current-tick counts decay by alpha per tick
/// instead of being cleared. The edge, source-node and destination-node scores
/// are combined by max or sum.
class MidasRScorer final : public EdgeScorer {
 public:
  MidasRScorer(const SketchParams& params, double alpha, Combiner combiner = Combiner::kMax);

  using EdgeScorer::process;
  ScoreResult process(std::string_view source, std::string_view destination,
                      std::uint64_t tick) override;
  void advance_to(std::uint64_t new_tick) override;
  std::uint64_t cell_touches() const noexcept override;

  double alpha() const noexcept { return alpha_; }
  Combiner combiner() const noexcept { return combiner_; }

  const CountMinSketch& total_edges() const noexcept { return total_edge_; }
  const CountMinSketch& current_edges() const noexcept { return current_edge_; }
  const CountMinSketch& total_sources() const noexcept { return total_source_; }
  const CountMinSketch& current_sources() const noexcept { return current_source_; }
  const CountMinSketch& total_destinations() const noexcept { return total_dest_; }
  const CountMinSketch& current_destinations() const noexcept { return current_dest_; }

 private:
  double alpha_;
  Combiner combiner_;
  CountMinSketch total_edge_, current_edge_;
  CountMinSketch total_source_, current_source_;
  CountMinSketch total_dest_, current_dest_;
};

std::unique_ptr<EdgeScorer> make_scorer(const ScorerConfig& config);

}  // namespace midas
