#include "btp/scheme.hpp"

#include <cstdio>

#include "btp/errors.hpp"

namespace btp {

LambdaSet::LambdaSet(bool pi, bool ad) : pi_(pi), ad_(ad) {
  if (!pi && !ad) throw ContractError("Lambda must be a nonempty subset of {PI, AD}");
}

LambdaSet LambdaSet::parse(const std::string& text) {
  if (text == "pi") return pi_only();
  if (text == "ad") return ad_only();
  if (text == "pi+ad" || text == "ad+pi") return both();
  if (text.empty()) throw ContractError("Lambda must be a nonempty subset of {PI, AD}");
  throw ConfigError("unknown Lambda '" + text + "' (expected pi, ad or pi+ad)");
}

std::string LambdaSet::to_string() const {
  if (is_full()) return "pi+ad";
  return pi_ ? "pi" : "ad";
}

LambdaView lambda_project(const ProtectedTemplate& pt, const LambdaSet& lambda) {
  LambdaView view;
  if (lambda.has_pi()) view.pi = pt.pi;
  if (lambda.has_ad()) view.alpha = pt.alpha;
  return view;
}

LambdaView lambda_project(const LambdaView& view, const LambdaSet& lambda) {
  LambdaView out;
  if (lambda.has_pi()) {
    if (!view.pi) throw ContractError("view carries no PI");
    out.pi = view.pi;
  }
  if (lambda.has_ad()) {
    if (!view.alpha) throw ContractError("view carries no AD");
    out.alpha = view.alpha;
  }
  return out;
}

bool BtpScheme::consistent(const LambdaView& view, const LambdaSet& lambda,
                           const FeatureElement& x) const {
  for (std::uint64_t r = 0; r < randomness_size(); ++r) {
    if (lambda_project(encode_with(x, r), lambda) == view) return true;
  }
  return false;
}

void BtpScheme::check_probe(const FeatureElement& x) const {
  if (x.dimension() != dimension()) {
    throw DimensionError(name() + ": feature of dimension " + std::to_string(x.dimension()) +
                         ", scheme expects " + std::to_string(dimension()));
  }
}

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

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

std::string to_string(const Identifier& id) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FeatureElement>) {
          return v.to_string();
        } else if constexpr (std::is_same_v<T, Digest128>) {
          return hex(v);
        } else {
          return "reject";
        }
      },
      id);
}

std::string to_string(const AuxData& alpha) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FeatureElement>) {
          return v.to_string();
        } else if constexpr (std::is_same_v<T, std::uint32_t>) {
          return std::to_string(v);
        } else {
          return "";
        }
      },
      alpha);
}

std::uint64_t fingerprint(const Identifier& id) {
  std::uint64_t h = fnv(kFnvOffset, id.index());
  std::visit(
      [&h](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FeatureElement>) {
          h = fnv(fnv(h, v.bits()), static_cast<std::uint64_t>(v.dimension()));
        } else if constexpr (std::is_same_v<T, Digest128>) {
          for (auto b : v.bytes) h = fnv(h, b);
        }
      },
      id);
  return h;
}

std::uint64_t fingerprint(const AuxData& alpha) {
  std::uint64_t h = fnv(kFnvOffset ^ 0x5a, alpha.index());
  std::visit(
      [&h](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FeatureElement>) {
          h = fnv(fnv(h, v.bits()), static_cast<std::uint64_t>(v.dimension()));
        } else if constexpr (std::is_same_v<T, std::uint32_t>) {
          h = fnv(h, v);
        }
      },
      alpha);
  return h;
}

}  // namespace btp
