#include "midas/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <utility>

#include "midas/errors.hpp"

namespace midas {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string token(std::string_view field, const char* what, std::size_t line_no) {
  if (field.empty()) throw ParseError(std::string("empty ") + what + " token", line_no);
  if (field.find('\0') != std::string_view::npos) {
    throw ParseError(std::string(what) + " token contains a NUL byte", line_no);
  }
  return std::string(field);
}

std::uint64_t parse_tick(std::string_view field, std::uint64_t width, std::size_t line_no) {
  if (field.empty()) throw ParseError("empty tick", line_no);
  if (field.front() == '-') throw ParseError("negative tick '" + std::string(field) + "'", line_no);
  if (field.front() == '+') field.remove_prefix(1);
  std::uint64_t raw = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), raw);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("tick '" + std::string(field) + "' is not a nonnegative integer", line_no);
  }
  return raw / width;
}

bool parse_label(std::string_view field, std::size_t line_no) {
  if (field == "0") return false;
  if (field == "1") return true;
  throw ParseError("label '" + std::string(field) + "' is not 0 or 1", line_no);
}

}  // namespace

std::vector<Column> parse_columns(std::string_view spec) {
  std::vector<Column> cols;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t end = std::min(spec.find(',', start), spec.size());
    const std::string name = lower(trim(spec.substr(start, end - start)));
    if (name == "src" || name == "source" || name == "u") {
      cols.push_back(Column::kSource);
    } else if (name == "dst" || name == "destination" || name == "v") {
      cols.push_back(Column::kDestination);
    } else if (name == "tick" || name == "time" || name == "t") {
      cols.push_back(Column::kTick);
    } else if (name == "label" || name == "attack" || name == "y") {
      cols.push_back(Column::kLabel);
    } else if (name == "_" || name == "skip") {
      cols.push_back(Column::kIgnore);
    } else {
      throw ParameterError("unknown column '" + name + "'");
    }
    start = end + 1;
  }
  const auto count = [&](Column c) { return std::count(cols.begin(), cols.end(), c); };
  if (count(Column::kSource) != 1 || count(Column::kDestination) != 1 || count(Column::kTick) != 1 ||
      count(Column::kLabel) > 1) {
    throw ParameterError("columns need exactly one src, dst and tick and at most one label");
  }
  return cols;
}

Edge parse_line(std::string_view line, const StreamFormat& format, std::size_t line_no) {
  if (format.tick_width < 1) throw ParameterError("tick width must be at least 1");
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

  std::vector<std::string_view> fields;
  fields.reserve(format.columns.size());
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(format.delimiter, start);
    fields.push_back(trim(line.substr(start, end == std::string_view::npos ? end : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }

  const std::size_t want = format.columns.size();
  const bool optional_label = !format.columns.empty() && format.columns.back() == Column::kLabel;
  if (fields.size() != want && !(optional_label && fields.size() + 1 == want)) {
    throw ParseError("expected " + std::to_string(want) + " fields, found " +
                         std::to_string(fields.size()),
                     line_no);
  }

  Edge e;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    switch (format.columns[i]) {
      case Column::kSource: e.source = token(fields[i], "source", line_no); break;
      case Column::kDestination: e.destination = token(fields[i], "destination", line_no); break;
      case Column::kTick: e.tick = parse_tick(fields[i], format.tick_width, line_no); break;
      case Column::kLabel: e.label = parse_label(fields[i], line_no); break;
      case Column::kIgnore: break;
    }
  }
  return e;
}

std::string serialize_edge(const Edge& edge, const StreamFormat& format) {
  std::string out;
  for (std::size_t i = 0; i < format.columns.size(); ++i) {
    const Column c = format.columns[i];
    if (c == Column::kLabel && !edge.label && i + 1 == format.columns.size()) break;
    if (i) out += format.delimiter;
    switch (c) {
      case Column::kSource: out += edge.source; break;
      case Column::kDestination: out += edge.destination; break;
      case Column::kTick: out += std::to_string(edge.tick); break;
      case Column::kLabel:
        if (edge.label) out += *edge.label ? '1' : '0';
        break;
      case Column::kIgnore: break;
    }
  }
  return out;
}

EdgeReader::EdgeReader(std::istream& in, StreamFormat format, WarningSink warn)
    : in_(in), format_(std::move(format)), warn_(std::move(warn)) {
  if (format_.tick_width < 1) throw ParameterError("tick width must be at least 1");
}

std::optional<Edge> EdgeReader::next() {
  if (pending_) {
    std::optional<Edge> out = std::move(pending_);
    pending_.reset();
    return out;
  }
  while (std::getline(in_, line_)) {
    ++line_no_;
    const std::string_view body = trim(line_);
    if (body.empty() || body.front() == '#') continue;

    Edge e = parse_line(line_, format_, line_no_);
    if (last_tick_ && e.tick < *last_tick_) {
      const std::string msg = "tick " + std::to_string(e.tick) + " is earlier than preceding tick " +
                              std::to_string(*last_tick_);
      if (format_.on_disorder == OrderPolicy::kError) throw StreamOrderError(msg, line_no_);
      ++skipped_;
      if (warn_) warn_("line " + std::to_string(line_no_) + ": " + msg + "; record skipped");
      continue;
    }
    last_tick_ = e.tick;
    if (format_.undirected) {
      pending_ = Edge{e.destination, e.source, e.tick, e.label};
    }
    return e;
  }
  if (in_.bad()) throw IoError("read failure after line " + std::to_string(line_no_));
  return std::nullopt;
}

}  // namespace midas
