#include <cmath>

#include "doctest.h"
#include "xenakis/error.hpp"
#include "xenakis/geo.hpp"

using namespace xenakis;

TEST_CASE("make_point folds longitude and rejects bad latitude") {
  CHECK(make_point(10.0, 190.0).lon == doctest::Approx(-170.0));
  CHECK(make_point(10.0, -190.0).lon == doctest::Approx(170.0));
  CHECK(make_point(-90.0, 180.0).lat == -90.0);
  CHECK_THROWS_AS(make_point(90.5, 0.0), Error);
  CHECK_THROWS_AS(make_point(std::nan(""), 0.0), Error);
}

TEST_CASE("bounding boxes validate and render") {
  const BoundingBox b = make_bbox(16.3, 48.1, 16.4, 48.2);
  CHECK(b.contains({48.15, 16.35}));
  CHECK_FALSE(b.contains({48.25, 16.35}));
  CHECK(b.overpass_order() == "48.10000,16.30000,48.20000,16.40000");
  CHECK(b.to_string() == "16.30000,48.10000,16.40000,48.20000");
  CHECK(parse_bbox("16.3, 48.1,16.4,48.2") == b);

  for (auto bad : {"16.4,48.1,16.3,48.2", "16.3,48.2,16.4,48.1", "1,2,3", "a,b,c,d",
                   "0,-91,1,0", "16.3,48.1,16.3,48.2", "1,2,3,4,5"}) {
    CAPTURE(bad);
    try {
      parse_bbox(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidBoundingBox);
    }
  }
}

TEST_CASE("rounded boxes compare equal across float noise") {
  const BoundingBox a = make_bbox(16.3, 48.1, 16.4, 48.2);
  const BoundingBox b = make_bbox(16.3000000001, 48.0999999999, 16.4, 48.2000000004);
  CHECK(a.rounded() == b.rounded());
  CHECK(a.intersects(b));
  CHECK_FALSE(a.intersects(make_bbox(17.0, 48.1, 17.1, 48.2)));
}

TEST_CASE("error codes have stable names") {
  CHECK(to_string(ErrorCode::InvalidBoundingBox) == "bad_bbox");
  CHECK(to_string(ErrorCode::InvalidBinCount) == "bad_bins");
  CHECK(to_string(ErrorCode::InvalidTempo) == "bad_tempo");
  CHECK(to_string(ErrorCode::MalformedDocument) != to_string(ErrorCode::ProviderError));
}
