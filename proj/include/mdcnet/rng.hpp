#pragma once

#include <cstdint>
#include <random>

namespace mdcnet {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based sub-seed: the same (seed, stream) pair always yields the same value,
// whatever order workers ask for them.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

enum class Stream : std::uint64_t {
  sensors = 1,
  mdcs = 2,
  aps = 3,
  mobility = 4,
  traffic = 5,
  fading = 6,
  aggregation = 7,
  oracle = 8,
};

class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, Stream s) : engine_(derive_seed(seed, static_cast<std::uint64_t>(s))) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
  double exponential(double mean) { return std::exponential_distribution<double>(1.0 / mean)(engine_); }
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<long>(mean)(engine_);
  }
  // Number of trials up to and including the first success.
  long geometric_trials(double p) { return std::geometric_distribution<long>(p)(engine_) + 1; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mdcnet
