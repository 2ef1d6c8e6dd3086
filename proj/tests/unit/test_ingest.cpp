#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "test_support.hpp"
#include "xenakis/error.hpp"
#include "xenakis/ingest/geojson.hpp"
#include "xenakis/ingest/segments.hpp"

using namespace xenakis;
using namespace xenakis::ingest;
namespace fs = std::filesystem;

namespace {

std::string collection(const std::string& features) {
  return R"({"type":"FeatureCollection","features":[)" + features + "]}";
}

std::string line_feature(const std::string& coords, const std::string& kind = "residential") {
  return R"({"type":"Feature","properties":{"highway":")" + kind +
         R"("},"geometry":{"type":"LineString","coordinates":)" + coords + "}}";
}

}  // namespace

TEST_CASE("parser keeps line strings and counts what it skips") {
  const std::string doc = collection(
      line_feature("[[0,0],[0,0.001]]") + "," +
      R"({"type":"Feature","properties":{},"geometry":{"type":"Point","coordinates":[0,0]}},)"
      R"({"type":"Feature","properties":null,"geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}},)"
      R"({"type":"Feature","properties":{},"geometry":null})");
  const ParseResult r = parse_feature_collection(doc);
  REQUIRE(r.features.size() == 1);
  CHECK(r.features[0].kind == "residential");
  CHECK(r.features[0].path.size() == 2);
  // GeoJSON order is [lon, lat]
  CHECK(r.features[0].path[1].lat == doctest::Approx(0.001));
  CHECK(r.summary.features_seen == 4);
  CHECK(r.summary.skipped_by_type.at("Point") == 1);
  CHECK(r.summary.skipped_by_type.at("Polygon") == 1);
  CHECK(r.summary.skipped() == 3);
}

TEST_CASE("consecutive duplicate points are removed") {
  const ParseResult r =
      parse_feature_collection(collection(line_feature("[[0,0],[0,0],[0,0.001],[0,0.001]]")));
  REQUIRE(r.features.size() == 1);
  CHECK(r.features[0].path.size() == 2);
  CHECK(r.summary.duplicate_points_removed == 2);
}

TEST_CASE("line collapsing to one point is skipped, not an error") {
  const ParseResult r = parse_feature_collection(collection(line_feature("[[1,1],[1,1]]")));
  CHECK(r.features.empty());
  CHECK(r.summary.skipped_degenerate == 1);
}

TEST_CASE("multi line strings become one feature per part") {
  const ParseResult r = parse_feature_collection(collection(
      R"({"type":"Feature","id":"w","properties":{"highway":"primary"},"geometry":{"type":"MultiLineString","coordinates":[[[0,0],[0,1]],[[1,0],[2,0]]]}})"));
  REQUIRE(r.features.size() == 2);
  CHECK(r.features[0].kind == "primary");
  CHECK(r.features[1].id == "w#1");
}

TEST_CASE("empty collection parses") {
  const ParseResult r = parse_feature_collection(read_text_file(testing::fixture("empty.geojson").string()));
  CHECK(r.features.empty());
  CHECK(r.summary.features_seen == 0);
}

TEST_CASE("malformed corpus always raises MalformedDocument") {
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(testing::fixture("malformed"))) {
    ++files;
    CAPTURE(entry.path().filename().string());
    const std::string text = read_text_file(entry.path().string());
    CHECK_THROWS_AS(parse_feature_collection(text), MalformedDocument);
  }
  CHECK(files >= 10);
}

TEST_CASE("lexical errors carry line and column") {
  const std::string text = read_text_file(testing::fixture("malformed/trailing_comma.geojson").string());
  try {
    parse_feature_collection(text);
    FAIL("parsed");
  } catch (const MalformedDocument& e) {
    CHECK(e.line() > 1);
    CHECK(e.column() >= 1);
    CHECK(e.code() == ErrorCode::MalformedDocument);
  }
}

TEST_CASE("missing file is an Io error") {
  try {
    read_text_file("/nonexistent/xenakis.geojson");
    FAIL("read");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("segments have length and folded bearing") {
  const ParseResult r = parse_feature_collection(
      collection(line_feature("[[0,0],[0.001,0]]") + "," + line_feature("[[0,0],[0,0.001]]")));
  const auto segs = explode_segments(r.features, StreetFilter::defaults());
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].bearing_deg == doctest::Approx(90.0).epsilon(1e-4));
  CHECK(segs[0].length_m == doctest::Approx(111.19492664455874).epsilon(1e-9));
  CHECK(segs[1].bearing_deg < 0.01);
  CHECK(segs[1].length_m == doctest::Approx(111.19492664455874).epsilon(1e-9));
}

TEST_CASE("segment count is points minus one per accepted feature") {
  const ParseResult r = parse_feature_collection(
      read_text_file(testing::fixture("grid.geojson").string()));
  const auto segs = explode_segments(r.features, StreetFilter::defaults());
  CHECK(segs.size() == 15);  // 5 x 2 north-south, 5 x 1 east-west; the footway is filtered
  const auto all = explode_segments(r.features, StreetFilter::accept_all());
  CHECK(all.size() == 16);
  for (const auto& s : all) {
    CHECK(s.length_m > 0.0);
    CHECK(s.bearing_deg >= 0.0);
    CHECK(s.bearing_deg < 180.0);
  }
}

TEST_CASE("segments below the noise floor are dropped") {
  const ParseResult r =
      parse_feature_collection(collection(line_feature("[[0,0],[0,0.000001],[0,0.001]]")));
  const auto segs = explode_segments(r.features, StreetFilter::defaults());
  CHECK(segs.size() == 1);
}

TEST_CASE("street filter") {
  const StreetFilter d = StreetFilter::defaults();
  CHECK(d.accepts("residential"));
  CHECK(d.accepts("primary_link"));
  CHECK_FALSE(d.accepts("footway"));
  CHECK_FALSE(d.accepts("unknown"));
  CHECK(StreetFilter::parse("all").accepts("footway"));
  CHECK(StreetFilter::parse("*").accepts_everything());
  const StreetFilter only = StreetFilter::parse("footway,cycleway");
  CHECK(only.accepts("cycleway"));
  CHECK_FALSE(only.accepts("residential"));
  CHECK(StreetFilter::parse("default").kinds() == d.kinds());
}

TEST_CASE("an east then north path gives bearings 90 and 0") {
  const ParseResult r =
      parse_feature_collection(collection(line_feature("[[0,0],[0.001,0],[0.001,0.001]]")));
  const auto segs = explode_segments(r.features, StreetFilter::defaults());
  REQUIRE(segs.size() == 2);
  CHECK(std::abs(segs[0].bearing_deg - 90.0) < 0.01);
  CHECK(std::min(segs[1].bearing_deg, 180.0 - segs[1].bearing_deg) < 0.01);
}
