#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace btp {

using Rng = std::mt19937_64;

/// Named sub-streams. Games that share (seed, trial index, stream) see the
/// same randomness, which is what coupled-trial checks rely on.
enum class Stream : std::uint64_t {
  kChallengerOracle = 1,
  kEncoder = 2,
  kAdversaryOracle = 3,
  kAdversaryCoins = 4,
  kChallengerCoin = 5,
  kEstimator = 6,
  kCandidates = 7,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for one (master seed, index, stream) triple. Independent of scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream) {
  return mix64(mix64(mix64(master) ^ index) ^ (stream * 0xd1b54a32d192ed03ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Stream stream) {
  return derive_seed(master, index, static_cast<std::uint64_t>(stream));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t index, Stream stream) {
  return Rng(derive_seed(master, index, stream));
}

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

inline int fair_coin(Rng& rng) { return static_cast<int>(rng() >> 63); }

/// Evaluates fn(i) for i in [0, count) on `jobs` threads and returns the
/// results in index order. Work is split into contiguous blocks so the output
/// does not depend on the number of jobs.
template <typename T, typename Fn>
std::vector<T> run_indexed(std::uint64_t count, unsigned jobs, Fn&& fn) {
  std::vector<T> out(count);
  if (jobs <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  const std::uint64_t workers = std::min<std::uint64_t>(jobs, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::uint64_t begin = count * w / workers;
        const std::uint64_t end = count * (w + 1) / workers;
        for (std::uint64_t i = begin; i < end; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace btp
