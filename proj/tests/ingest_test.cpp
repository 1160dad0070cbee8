#include "midas/ingest.hpp"

#include <sys/resource.h>

#include <random>
#include <sstream>
#include <streambuf>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "midas/errors.hpp"

namespace midas {
namespace {

std::vector<Edge> read_all(const std::string& text, StreamFormat format = {},
                           std::vector<std::string>* warnings = nullptr) {
  std::istringstream in(text);
  EdgeReader reader(in, std::move(format), [warnings](const std::string& w) {
    if (warnings) warnings->push_back(w);
  });
  std::vector<Edge> out;
  while (auto e = reader.next()) out.push_back(*e);
  return out;
}

TEST(ParseLine, LabeledRecord) {
  const Edge e = parse_line("10.0.0.1,10.0.0.2,57,1", StreamFormat{});
  EXPECT_EQ(e, (Edge{"10.0.0.1", "10.0.0.2", 57, true}));
}

TEST(ParseLine, UnlabeledRecord) {
  const Edge e = parse_line("a,b,3", StreamFormat{});
  EXPECT_EQ(e.source, "a");
  EXPECT_EQ(e.destination, "b");
  EXPECT_EQ(e.tick, 3u);
  EXPECT_FALSE(e.label.has_value());
}

TEST(ParseLine, NegativeTick) {
  try {
    parse_line("a,b,-1", StreamFormat{}, 12);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 12u);
    EXPECT_NE(std::string(e.what()).find("line 12"), std::string::npos);
  }
}

TEST(ParseLine, Malformed) {
  const StreamFormat f;
  EXPECT_THROW(parse_line("a,b", f), ParseError);
  EXPECT_THROW(parse_line("a,b,1,0,extra", f), ParseError);
  EXPECT_THROW(parse_line("a,b,x", f), ParseError);
  EXPECT_THROW(parse_line("a,b,1.5", f), ParseError);
  EXPECT_THROW(parse_line(",b,1", f), ParseError);
  EXPECT_THROW(parse_line("a, ,1", f), ParseError);
  EXPECT_THROW(parse_line("a,b,1,2", f), ParseError);
  EXPECT_THROW(parse_line(std::string("a\0x,b,1", 7), f), ParseError);
  EXPECT_THROW(parse_line("a,b,99999999999999999999999", f), ParseError);
}

TEST(ParseLine, TrimsWhitespaceAndCarriageReturn) {
  const Edge e = parse_line("  a , b\t, 4 ,0\r", StreamFormat{});
  EXPECT_EQ(e, (Edge{"a", "b", 4, false}));
}

TEST(ParseLine, CustomLayout) {
  StreamFormat f;
  f.delimiter = '\t';
  f.columns = parse_columns("tick,_,dst,src");
  const Edge e = parse_line("9\tproto\ty\tx", f);
  EXPECT_EQ(e, (Edge{"x", "y", 9, std::nullopt}));
}

TEST(ParseLine, TickQuantization) {
  StreamFormat f;
  f.tick_width = 60;
  EXPECT_EQ(parse_line("a,b,59", f).tick, 0u);
  EXPECT_EQ(parse_line("a,b,60", f).tick, 1u);
  EXPECT_EQ(parse_line("a,b,3601", f).tick, 60u);
  f.tick_width = 0;
  EXPECT_THROW(parse_line("a,b,1", f), ParameterError);
}

TEST(ParseColumns, NamesAndErrors) {
  EXPECT_EQ(parse_columns("u, v, t"), (std::vector<Column>{Column::kSource, Column::kDestination, Column::kTick}));
  EXPECT_EQ(parse_columns("SRC,DST,TIME,ATTACK").back(), Column::kLabel);
  EXPECT_THROW(parse_columns("src,dst"), ParameterError);
  EXPECT_THROW(parse_columns("src,src,dst,tick"), ParameterError);
  EXPECT_THROW(parse_columns("src,dst,tick,bogus"), ParameterError);
}

TEST(SerializeEdge, RoundTripsCanonicalLines) {
  std::mt19937_64 rng(6);
  const std::string alphabet = "abcxyz0123456789.:-_";
  const auto token = [&] {
    std::string s;
    const int len = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    return s;
  };
  for (const char* cols : {"src,dst,tick,label", "tick,dst,src", "dst,label,src,tick"}) {
    StreamFormat f;
    f.columns = parse_columns(cols);
    for (int i = 0; i < 500; ++i) {
      Edge e{token(), token(), rng() % 100000, std::nullopt};
      if (std::find(f.columns.begin(), f.columns.end(), Column::kLabel) != f.columns.end()) {
        e.label = rng() % 2 == 1;
      }
      const std::string line = serialize_edge(e, f);
      EXPECT_EQ(parse_line(line, f), e);
      EXPECT_EQ(serialize_edge(parse_line(line, f), f), line);
    }
  }
  EXPECT_EQ(serialize_edge(parse_line(" a ,b, 007\r", StreamFormat{}), StreamFormat{}), "a,b,7");
}

TEST(EdgeReader, DecreasingTickNamesLine) {
  try {
    read_all("a,b,5\na,b,4\n");
    FAIL() << "expected StreamOrderError";
  } catch (const StreamOrderError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(EdgeReader, SkipPolicyDropsOutOfOrderRecords) {
  StreamFormat f;
  f.on_disorder = OrderPolicy::kSkip;
  std::vector<std::string> warnings;
  const auto edges = read_all("a,b,5\nc,d,4\ne,f,5\n", f, &warnings);
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[1].source, "e");
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("line 2"), std::string::npos);
}

TEST(EdgeReader, UndirectedExpansion) {
  StreamFormat f;
  f.undirected = true;
  const auto edges = read_all("a,b,1\n", f);
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges[0], (Edge{"a", "b", 1, std::nullopt}));
  EXPECT_EQ(edges[1], (Edge{"b", "a", 1, std::nullopt}));
}

TEST(EdgeReader, OneEdgePerDirectedLine) {
  std::string text;
  for (int i = 0; i < 1000; ++i) {
    text += "10.0." + std::to_string(i % 7) + ".1,172.16.0." + std::to_string(i % 13) + "," +
            std::to_string(i / 60 + 1) + "," + std::to_string(i % 17 == 0) + "\r\n";
  }
  const auto edges = read_all(text);
  EXPECT_EQ(edges.size(), 1000u);
  EXPECT_EQ(edges[17].label, std::optional<bool>(true));
}

TEST(EdgeReader, SkipsBlankAndCommentLines) {
  EXPECT_EQ(read_all("# header\n\na,b,1\n   \n#x\nb,c,2").size(), 2u);
}

TEST(EdgeReader, ParseErrorCarriesLineNumber) {
  try {
    read_all("a,b,1\n\nbad line\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

// Produces `lines` synthetic records on demand without materializing them.
class GeneratedEdges : public std::streambuf {
 public:
  explicit GeneratedEdges(std::uint64_t lines) : remaining_(lines) {}

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    if (remaining_ == 0) return traits_type::eof();
    buf_.clear();
    for (int i = 0; i < 256 && remaining_ > 0; ++i, --remaining_, ++n_) {
      buf_ += "192.168." + std::to_string(n_ % 251) + "." + std::to_string(n_ % 7) + ",10.1." +
              std::to_string(n_ % 97) + ".3," + std::to_string(n_ / 1000) + ",0\n";
    }
    setg(buf_.data(), buf_.data(), buf_.data() + buf_.size());
    return traits_type::to_int_type(*gptr());
  }

 private:
  std::uint64_t remaining_;
  std::uint64_t n_ = 0;
  std::string buf_;
};

long max_rss_kb() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return u.ru_maxrss;
}

TEST(EdgeReader, StreamsWithoutBufferingInput) {
  const std::uint64_t lines = 2000000;  // roughly 70 MB of text
  GeneratedEdges gen(lines);
  std::istream in(&gen);
  const long before = max_rss_kb();
  EdgeReader reader(in, StreamFormat{});
  std::uint64_t n = 0;
  std::uint64_t bytes = 0;
  while (auto e = reader.next()) {
    ++n;
    bytes += e->source.size() + e->destination.size() + 8;
  }
  EXPECT_EQ(n, lines);
  EXPECT_GT(bytes, 40u * 1024u * 1024u);
  // Memory ceiling far below the stream size.
  EXPECT_LT(max_rss_kb() - before, 16 * 1024);
}

}  // namespace
}  // namespace midas
