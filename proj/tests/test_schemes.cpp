#include <doctest.h>

#include <cstdio>
#include <string>

#include "btp/linear_code.hpp"
#include "btp/scheme.hpp"
#include "btp/schemes.hpp"
#include "oracles.hpp"

using namespace btp;

namespace {

std::string hex(const Digest128& d) {
  std::string out;
  char buf[3];
  for (auto b : d.bytes) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

}  // namespace

TEST_CASE("blake2b-128 known answers") {
  CHECK(hex(blake2b_128({})) == "cae66941d9efbd404e4d88758ea67670");
  const std::uint8_t abc[] = {'a', 'b', 'c'};
  CHECK(hex(blake2b_128(abc)) == "cf4ab791c62b8d2b2109c90275287816");
}

TEST_CASE("hamming [7,4] code parameters") {
  const auto code = LinearCode::hamming74();
  CHECK(code.length() == 7);
  CHECK(code.message_bits() == 4);
  CHECK(code.size() == 16);
  CHECK(code.min_distance() == 3);
  CHECK(code.radius() == 1);
  for (const auto& w : code.codewords()) CHECK(code.is_codeword(w));
}

TEST_CASE("bounded distance decoding on the hamming code") {
  const auto code = LinearCode::hamming74();
  for (const auto& w : code.codewords()) {
    CHECK(bounded_distance_decode(code, w) == w);
    for (int i = 0; i < 7; ++i) {
      CHECK(code.decode(w ^ FeatureElement(1ULL << i, 7)) == w);
      for (int j = i + 1; j < 7; ++j) {
        const auto got = code.decode(w ^ FeatureElement((1ULL << i) | (1ULL << j), 7));
        REQUIRE(got.has_value());
        CHECK(*got != w);
      }
    }
  }
  CHECK_THROWS_AS(code.decode(FeatureElement::zeros(6)), DimensionError);
}

TEST_CASE("a requested radius above the code's capability is rejected") {
  auto rows = LinearCode::hamming74().generator();
  CHECK_THROWS_AS(LinearCode(rows, 2), ConfigError);
  CHECK(LinearCode(rows, 0).radius() == 0);
}

TEST_CASE("repetition code decodes up to its radius and rejects beyond") {
  const auto code = LinearCode::from_rows({"11111"});
  CHECK(code.min_distance() == 5);
  CHECK(code.radius() == 2);
  const auto narrow = LinearCode::from_rows({"11111"}, 1);
  CHECK_FALSE(narrow.decode(FeatureElement::from_string("11000")).has_value());
  CHECK(narrow.decode(FeatureElement::from_string("10000")) == FeatureElement::zeros(5));
}

TEST_CASE("fuzzy commitment: match iff d <= t, exhaustively") {
  const auto fc = oracle::default_scheme();
  REQUIRE(fc->randomness_size() == 16);
  for (std::uint64_t x = 0; x < 128; ++x) {
    for (std::uint64_t r = 0; r < 16; ++r) {
      const auto pt = fc->encode_with(FeatureElement(x, 7), r);
      const auto& alpha = std::get<FeatureElement>(pt.alpha);
      CHECK(LinearCode::hamming74().is_codeword(alpha ^ FeatureElement(x, 7)));
      for (std::uint64_t y = 0; y < 128; ++y) {
        CHECK(fc->accepts(pt, FeatureElement(y, 7)) == (oracle::dist(x, y) <= 1));
      }
    }
  }
}

TEST_CASE("fuzzy commitment reject identifier never matches") {
  const auto code = LinearCode::from_rows({"11111"}, 1);
  FuzzyCommitment fc(code);
  const auto pt = fc.encode_with(FeatureElement::zeros(5), 0);
  const auto id = fc.recover(pt.alpha, FeatureElement::from_string("11000"));
  CHECK(std::holds_alternative<RejectId>(id));
  CHECK(fc.compare(id, id) == Decision::kNonMatch);
  CHECK(fc.compare(pt.pi, id) == Decision::kNonMatch);
}

TEST_CASE("rotation and plaintext schemes compare by distance") {
  for (int threshold : {0, 1, 2}) {
    const auto rot = oracle::scheme("rot", 6, threshold);
    const auto plain = oracle::scheme("plain", 6, threshold);
    for (std::uint64_t x = 0; x < 64; ++x) {
      for (std::uint64_t r = 0; r < 6; ++r) {
        const auto pt = rot->encode_with(FeatureElement(x, 6), r);
        CHECK(std::get<FeatureElement>(pt.pi).rotated(6 - static_cast<int>(r)) == FeatureElement(x, 6));
        for (std::uint64_t y = 0; y < 64; ++y)
          CHECK(rot->accepts(pt, FeatureElement(y, 6)) == (oracle::dist(x, y) <= threshold));
      }
      const auto pt = plain->encode_with(FeatureElement(x, 6), 0);
      CHECK(std::get<FeatureElement>(pt.pi) == FeatureElement(x, 6));
      for (std::uint64_t y = 0; y < 64; ++y)
        CHECK(plain->accepts(pt, FeatureElement(y, 6)) == (oracle::dist(x, y) <= threshold));
    }
  }
}

TEST_CASE("threshold compatibility is honest, exhaustively at n <= 8") {
  std::vector<std::unique_ptr<BtpScheme>> schemes;
  schemes.push_back(oracle::default_scheme());
  schemes.push_back(oracle::scheme("rot", 8, 2));
  schemes.push_back(oracle::scheme("plain", 8, 1));
  schemes.push_back(oracle::scheme("always-match", 5));
  schemes.push_back(oracle::scheme("never-match", 5));
  for (const auto& s : schemes) {
    const int n = s->dimension();
    for (int tau = 0; tau <= 3; ++tau) {
      if (!s->threshold_compatible(tau)) continue;
      for (std::uint64_t x = 0; x < (1ULL << n); ++x)
        for (std::uint64_t r = 0; r < s->randomness_size(); ++r) {
          const auto pt = s->encode_with(FeatureElement(x, n), r);
          for (std::uint64_t y = 0; y < (1ULL << n); ++y)
            if (oracle::dist(x, y) <= tau) CHECK(s->accepts(pt, FeatureElement(y, n)));
        }
    }
  }
  CHECK_FALSE(oracle::scheme("never-match", 5)->threshold_compatible(0));
  CHECK_FALSE(oracle::default_scheme()->threshold_compatible(2));
}

TEST_CASE("PIR and PIC are deterministic") {
  const auto fc = oracle::default_scheme();
  Rng rng(5);
  const auto pt = fc->encode(FeatureElement(0b1011001, 7), rng);
  const auto probe = FeatureElement(0b1011011, 7);
  const auto first = fc->recover(pt.alpha, probe);
  for (int i = 0; i < 10000; ++i) {
    REQUIRE(fc->recover(pt.alpha, probe) == first);
    REQUIRE(fc->compare(pt.pi, first) == Decision::kMatch);
  }
}

TEST_CASE("probe dimension is checked") {
  const auto fc = oracle::default_scheme();
  const auto pt = fc->encode_with(FeatureElement::zeros(7), 0);
  CHECK_THROWS_AS(fc->recover(pt.alpha, FeatureElement::zeros(6)), DimensionError);
  CHECK_THROWS_AS(fc->encode_with(FeatureElement::zeros(8), 0), DimensionError);
}

TEST_CASE("lambda projection equations") {
  const auto fc = oracle::default_scheme();
  const auto pt = fc->encode_with(FeatureElement(0b1010101, 7), 3);
  const auto both = lambda_project(pt, LambdaSet::both());
  CHECK(both.pi == pt.pi);
  CHECK(both.alpha == pt.alpha);
  const auto pi = lambda_project(pt, LambdaSet::pi_only());
  CHECK(pi.pi == pt.pi);
  CHECK_FALSE(pi.alpha.has_value());
  const auto ad = lambda_project(pt, LambdaSet::ad_only());
  CHECK_FALSE(ad.pi.has_value());
  CHECK(ad.alpha == pt.alpha);
  for (const auto& l : {LambdaSet::both(), LambdaSet::pi_only(), LambdaSet::ad_only()}) {
    const auto once = lambda_project(pt, l);
    CHECK(lambda_project(once, l) == once);
  }
  CHECK_THROWS_AS(LambdaSet(false, false), ContractError);
  CHECK_THROWS_AS(lambda_project(pi, LambdaSet::ad_only()), ContractError);
}

TEST_CASE("lambda set text form") {
  CHECK(LambdaSet::parse("pi") == LambdaSet::pi_only());
  CHECK(LambdaSet::parse("ad") == LambdaSet::ad_only());
  CHECK(LambdaSet::parse("pi+ad") == LambdaSet::both());
  CHECK(LambdaSet::parse("ad+pi") == LambdaSet::both());
  CHECK(LambdaSet::both().to_string() == "pi+ad");
  CHECK_THROWS_AS(LambdaSet::parse(""), ContractError);
  CHECK_THROWS_AS(LambdaSet::parse("pi+xx"), ConfigError);
}

TEST_CASE("consistency with a view") {
  const auto fc = oracle::default_scheme();
  const FeatureElement x(0b0110011, 7);
  const auto pt = fc->encode_with(x, 9);
  CHECK(fc->consistent(lambda_project(pt, LambdaSet::both()), LambdaSet::both(), x));
  CHECK_FALSE(fc->consistent(lambda_project(pt, LambdaSet::both()), LambdaSet::both(), x ^ FeatureElement(1, 7)));
  // The PI alone says only which codeword was drawn, so every x is consistent with it.
  CHECK(fc->consistent(lambda_project(pt, LambdaSet::pi_only()), LambdaSet::pi_only(), FeatureElement(0, 7)));
}

TEST_CASE("scheme registry") {
  for (const auto& name : scheme_names()) CHECK(oracle::scheme(name, 7, 1)->name() == name);
  CHECK_THROWS_AS(oracle::scheme("nope"), ConfigError);
  SchemeConfig cfg;
  cfg.n = 8;
  CHECK_THROWS_AS(make_scheme(cfg), ConfigError);
}
