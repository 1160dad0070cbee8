#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "midas/scorer.hpp"

namespace midas {

enum class Column { kSource, kDestination, kTick, kLabel, kIgnore };

enum class OrderPolicy { kError, kSkip };

/// Layout of a delimited edge file.
///
/// A line must carry exactly one field per column, except that a trailing
/// label column may be left off, in which case the edge has no label.
struct StreamFormat {
  char delimiter = ',';
  std::vector<Column> columns = {Column::kSource, Column::kDestination, Column::kTick,
                                 Column::kLabel};
  bool undirected = false;
  /// Raw ticks are divided by this width (floor) before use. Must be >= 1.
  std::uint64_t tick_width = 1;
  OrderPolicy on_disorder = OrderPolicy::kError;
};

/// Parses a column list such as "src,dst,tick,label". Recognized names:
/// src|source|u, dst|destination|v, tick|time|t, label|attack|y, and "_" or
/// "skip" for a column to ignore. Throws ParameterError.
std::vector<Column> parse_columns(std::string_view spec);

/// Parses one record. Tokens are whitespace-trimmed and a trailing CR is dropped.
/// Throws ParseError (tagged with line_no) on bad field counts, empty or
/// NUL-containing tokens, negative or non-integer ticks, or labels other than 0/1.
Edge parse_line(std::string_view line, const StreamFormat& format, std::size_t line_no = 0);

/// Writes an edge in the column order of format (ticks are written as stored,
/// ignored columns as empty fields, an absent label as nothing).
std::string serialize_edge(const Edge& edge, const StreamFormat& format);

/// Pulls edges from a text stream one line at a time.
///
/// Blank lines and lines starting with '#' are skipped. In undirected mode each
/// record yields (u, v, t) followed by (v, u, t). A tick that decreases raises
/// StreamOrderError, or under OrderPolicy::kSkip drops the record and reports it
/// through the warning sink.
class EdgeReader {
 public:
  using WarningSink = std::function<void(const std::string&)>;

  EdgeReader(std::istream& in, StreamFormat format, WarningSink warn = {});

  std::optional<Edge> next();

  std::size_t line_number() const noexcept { return line_no_; }
  std::size_t skipped() const noexcept { return skipped_; }

 private:
  std::istream& in_;
  StreamFormat format_;
  WarningSink warn_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::size_t skipped_ = 0;
  std::optional<std::uint64_t> last_tick_;
  std::optional<Edge> pending_;
};

}  // namespace midas
