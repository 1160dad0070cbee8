#include "midas/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "midas/errors.hpp"

namespace midas {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

__extension__ using Uint128 = unsigned __int128;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

SketchParams params_for(double nu, double epsilon, std::uint64_t seed) {
  if (!(nu > 0.0 && nu < 1.0)) throw ParameterError("nu must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  SketchParams p;
  // ln(2/(2/e)) evaluates to 1 + 1 ulp; drop sub-ulp noise before the ceiling.
  const double rows = std::log(2.0 / epsilon);
  const double buckets = std::numbers::e / nu;
  const auto snap = [](double x) {
    const double r = std::round(x);
    return std::abs(x - r) <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, r) ? r : x;
  };
  p.rows = static_cast<std::size_t>(std::max(1.0, std::ceil(snap(rows))));
  p.buckets = static_cast<std::size_t>(std::ceil(snap(buckets)));
  p.seed = seed;
  return p;
}

KeyHash node_key(std::string_view token) noexcept {
  return KeyHash{mix64(fnv1a(kFnvOffset, token))};
}

KeyHash edge_key(std::string_view source, std::string_view destination) noexcept {
  std::uint64_t h = fnv1a(kFnvOffset, source);
  h = fnv1a(h, std::string_view("\0", 1));
  return KeyHash{mix64(fnv1a(h, destination))};
}

CountMinSketch::CountMinSketch(const SketchParams& params) : params_(params) {
  if (params.rows < 1) throw ParameterError("sketch needs at least one row");
  if (params.buckets < 1) throw ParameterError("sketch needs at least one bucket");
  row_seeds_.resize(params.rows);
  for (std::size_t r = 0; r < params.rows; ++r) {
    row_seeds_[r] = mix64(params.seed + 0x9e3779b97f4a7c15ULL * (r + 1));
  }
  cells_.assign(params.rows * params.buckets, 0.0);
}

std::size_t CountMinSketch::bucket_of(KeyHash key, std::size_t row) const noexcept {
  const std::uint64_t h = mix64(key.value ^ row_seeds_[row]);
  return static_cast<std::size_t>((static_cast<Uint128>(h) * params_.buckets) >> 64);
}

void CountMinSketch::update(KeyHash key, double amount) {
  if (!(amount >= 0.0)) throw ParameterError("sketch update amount must be nonnegative");
  for (std::size_t r = 0; r < params_.rows; ++r) {
    cells_[r * params_.buckets + bucket_of(key, r)] += amount;
  }
  touches_ += params_.rows;
}

double CountMinSketch::query(KeyHash key) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < params_.rows; ++r) {
    best = std::min(best, cells_[r * params_.buckets + bucket_of(key, r)]);
  }
  touches_ += params_.rows;
  return best;
}

double CountMinSketch::update_and_query(KeyHash key, double amount) {
  if (!(amount >= 0.0)) throw ParameterError("sketch update amount must be nonnegative");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < params_.rows; ++r) {
    double& cell = cells_[r * params_.buckets + bucket_of(key, r)];
    cell += amount;
    best = std::min(best, cell);
  }
  touches_ += params_.rows;
  return best;
}

void CountMinSketch::scale(double factor) {
  if (!(factor >= 0.0 && factor <= 1.0)) throw ParameterError("scale factor must lie in [0, 1]");
  if (factor == 1.0) return;
  if (factor == 0.0) {
    reset();
    return;
  }
  for (double& c : cells_) c *= factor;
}

void CountMinSketch::reset() noexcept { std::fill(cells_.begin(), cells_.end(), 0.0); }

}  // namespace midas
