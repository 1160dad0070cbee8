#include "midas/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "midas/errors.hpp"

namespace midas {
namespace {

// Tick 0 carries no history, same as tick 1.
std::uint64_t statistic_tick(std::uint64_t tick) noexcept { return std::max<std::uint64_t>(tick, 1); }

}  // namespace

double chi2_score(double current, double total, std::uint64_t t) {
  if (t < 1) throw ParameterError("tick must be at least 1");
  if (t == 1 || total == 0.0) return 0.0;
  const double td = static_cast<double>(t);
  const double deviation = current - total / td;
  return deviation * deviation * td * td / (total * (td - 1.0));
}

void EdgeScorer::check_order(std::uint64_t tick) const {
  if (tick < current_tick_) {
    throw StreamOrderError("tick " + std::to_string(tick) + " precedes current tick " +
                               std::to_string(current_tick_),
                           0);
  }
}

MidasScorer::MidasScorer(const SketchParams& params) : total_(params), current_(params) {}

void MidasScorer::advance_to(std::uint64_t new_tick) {
  if (new_tick <= current_tick_) throw ParameterError("new tick must exceed the current tick");
  current_.reset();
  tick_edges_ = 0;
  current_tick_ = new_tick;
}

ScoreResult MidasScorer::process(std::string_view source, std::string_view destination,
                                 std::uint64_t tick) {
  check_order(tick);
  if (tick > current_tick_) advance_to(tick);

  const KeyHash key = edge_key(source, destination);
  ScoreResult r;
  r.counts.total = total_.update_and_query(key, 1.0);
  r.counts.current = current_.update_and_query(key, 1.0);
  r.counts.t = statistic_tick(tick);
  r.counts.tick_edges = ++tick_edges_;
  ++stream_edges_;

  r.edge_score = chi2_score(r.counts.current, r.counts.total, r.counts.t);
  r.score = r.edge_score;
  return r;
}

std::uint64_t MidasScorer::cell_touches() const noexcept {
  return total_.cell_touches() + current_.cell_touches();
}

MidasRScorer::MidasRScorer(const SketchParams& params, double alpha, Combiner combiner)
    : alpha_(alpha),
      combiner_(combiner),
      total_edge_(params),
      current_edge_(params),
      total_source_(params),
      current_source_(params),
      total_dest_(params),
      current_dest_(params) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("decay alpha must lie in (0, 1)");
}

void MidasRScorer::advance_to(std::uint64_t new_tick) {
  if (new_tick <= current_tick_) throw ParameterError("new tick must exceed the current tick");
  // One decay step per elapsed tick.
  const double factor = std::pow(alpha_, static_cast<double>(new_tick - current_tick_));
  current_edge_.scale(factor);
  current_source_.scale(factor);
  current_dest_.scale(factor);
  tick_edges_ = 0;
  current_tick_ = new_tick;
}

ScoreResult MidasRScorer::process(std::string_view source, std::string_view destination,
                                  std::uint64_t tick) {
  check_order(tick);
  if (tick > current_tick_) advance_to(tick);

  const KeyHash e = edge_key(source, destination);
  const KeyHash u = node_key(source);
  const KeyHash v = node_key(destination);
  const std::uint64_t t = statistic_tick(tick);

  ScoreResult r;
  r.counts.total = total_edge_.update_and_query(e, 1.0);
  r.counts.current = current_edge_.update_and_query(e, 1.0);
  r.counts.t = t;
  r.counts.tick_edges = ++tick_edges_;
  ++stream_edges_;

  const double su = total_source_.update_and_query(u, 1.0);
  const double au = current_source_.update_and_query(u, 1.0);
  const double sv = total_dest_.update_and_query(v, 1.0);
  const double av = current_dest_.update_and_query(v, 1.0);

  r.edge_score = chi2_score(r.counts.current, r.counts.total, t);
  r.source_score = chi2_score(au, su, t);
  r.destination_score = chi2_score(av, sv, t);
  r.score = combiner_ == Combiner::kMax
                ? std::max({r.edge_score, r.source_score, r.destination_score})
                : r.edge_score + r.source_score + r.destination_score;
  return r;
}

std::uint64_t MidasRScorer::cell_touches() const noexcept {
  return total_edge_.cell_touches() + current_edge_.cell_touches() +
         total_source_.cell_touches() + current_source_.cell_touches() +
         total_dest_.cell_touches() + current_dest_.cell_touches();
}

std::unique_ptr<EdgeScorer> make_scorer(const ScorerConfig& config) {
  if (config.variant == Variant::kMidas) return std::make_unique<MidasScorer>(config.sketch);
  return std::make_unique<MidasRScorer>(config.sketch, config.alpha, config.combiner);
}

}  // namespace midas
