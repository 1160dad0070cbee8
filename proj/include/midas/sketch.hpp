#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace midas {

/// Shape and hash seed of a Count-Min sketch. Sketches built from equal
/// params map every key to the same cells.
struct SketchParams {
  std::size_t rows = 2;
  std::size_t buckets = 2719;
  std::uint64_t seed = 0;

  friend bool operator==(const SketchParams&, const SketchParams&) = default;
};

/// Standard CMS sizing: rows = ceil(ln(2/epsilon)), buckets = ceil(e/nu).
/// With these sizes a point estimate exceeds the true count by more than
/// nu * N with probability at most epsilon / 2.
SketchParams params_for(double nu, double epsilon, std::uint64_t seed = 0);

/// 64-bit digest of a key's byte encoding. The sketch hashes digests, not bytes,
/// so callers can hash a token once and reuse it across several sketches.
struct KeyHash {
  std::uint64_t value = 0;
  friend bool operator==(KeyHash, KeyHash) = default;
};

/// Digest of a node token.
KeyHash node_key(std::string_view token) noexcept;

/// Digest of the edge encoding `source 0x00 destination`.
KeyHash edge_key(std::string_view source, std::string_view destination) noexcept;

/// Count-Min sketch over real-valued, nonnegative counts.
///
/// Storage is a fixed rows x buckets grid allocated at construction. Updates add
/// to one cell per row; queries return the row minimum, which never falls below
/// the exact accumulated amount for a key.
class CountMinSketch {
 public:
  explicit CountMinSketch(const SketchParams& params);

  const SketchParams& params() const noexcept { return params_; }
  std::size_t rows() const noexcept { return params_.rows; }
  std::size_t buckets() const noexcept { return params_.buckets; }

  void update(KeyHash key, double amount);
  double query(KeyHash key) const noexcept;

  /// update() followed by query(), touching each of the key's cells once.
  double update_and_query(KeyHash key, double amount);

  /// Multiplies every cell by factor, which must lie in [0, 1].
  void scale(double factor);
  void reset() noexcept;

  void update(std::string_view key, double amount) { update(node_key(key), amount); }
  double query(std::string_view key) const noexcept { return query(node_key(key)); }

  /// Bucket index of key in the given row.
  std::size_t bucket_of(KeyHash key, std::size_t row) const noexcept;

  std::span<const double> cells() const noexcept { return cells_; }

  /// Number of cell reads/writes made by update/query since construction.
  /// scale() and reset() are whole-grid operations and are not counted.
  std::uint64_t cell_touches() const noexcept { return touches_; }

 private:
  SketchParams params_;
  std::vector<std::uint64_t> row_seeds_;
  std::vector<double> cells_;
  mutable std::uint64_t touches_ = 0;
};

}  // namespace midas
