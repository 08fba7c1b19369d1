#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mfcz/signal_io.hpp"

using namespace mfcz;

namespace {

std::size_t parse_error_row(const std::string& text) {
  std::istringstream in(text);
  try {
    read_signal_csv(in);
  } catch (const ParseError& e) {
    return e.row();
  }
  return 0;
}

}  // namespace

TEST_CASE("signal csv round trip is exact") {
  const SampledSignal f({Complex(0.1, -2.0), Complex(1.0 / 3.0, 1e-300), Complex(-7.5e12, 0.0)}, -0.25, 0.1);
  std::stringstream buf;
  write_signal_csv(buf, f);
  const SampledSignal g = read_signal_csv(buf);
  REQUIRE(g.size() == f.size());
  CHECK(g.x0() == f.x0());
  CHECK(g.dx() == doctest::Approx(f.dx()).epsilon(1e-12));
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
}

TEST_CASE("malformed signal csv reports the line") {
  CHECK(parse_error_row("x,re\n0,1\n") == 1);
  CHECK(parse_error_row("x,re,im\n0,1,0\n0.25,1,0\n0.5,1,0\n0.8,1,0\n") == 3);
  CHECK(parse_error_row("x,re,im\n0,1,0\n0.5,abc,0\n") == 3);
  CHECK(parse_error_row("x,re,im\n0,1,0\n0.5,1\n") == 3);
  CHECK(parse_error_row("x,re,im\n0,1,0\n0.5,inf,0\n") == 3);
  CHECK(parse_error_row("x,re,im\n0,1,0\n-0.5,1,0\n") == 3);
  CHECK(parse_error_row("x,re,im\n") > 0);
}

TEST_CASE("sequence csv real and complex layouts") {
  std::istringstream real("k,v1,v2\n1,0,1\n3,2,0.5\n");
  const VectorSequence s = read_sequence_csv(real);
  CHECK(s.dim() == 2);
  CHECK(s.keys()[1] == 3);
  CHECK(s.value(1)[1] == Complex(0.5));

  const VectorSequence c({-2, 0, 5}, {Complex(1, 2), Complex(0, -1), Complex(3.25, 0)}, 1);
  std::stringstream buf;
  write_sequence_csv(buf, c);
  const VectorSequence d = read_sequence_csv(buf);
  REQUIRE(d.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(d.keys()[i] == c.keys()[i]);
    CHECK(d.value(i)[0] == c.value(i)[0]);
  }

  std::istringstream unsorted("k,v1\n2,0\n1,1\n");
  CHECK_THROWS_AS(read_sequence_csv(unsorted), ParseError);
  std::istringstream fractional("k,v1\n1.5,0\n");
  CHECK_THROWS_AS(read_sequence_csv(fractional), ParseError);
}
