#ifndef QFCERT_SAMPLING_HPP
#define QFCERT_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qfcert {

// splitmix64 finalizer; used to derive independent sub-stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

inline double uniform01(std::mt19937_64& eng) {
  return (eng() >> 11) * 0x1.0p-53;
}

// Log-uniform weights on [lo, hi]; the default range exercises every rule
// without pushing the oracle into unresolvable tails.
inline std::vector<double> log_uniform_weights(std::size_t n,
                                               std::uint64_t seed,
                                               double lo = 0.1,
                                               double hi = 10.0) {
  std::mt19937_64 eng(seed);
  const double llo = std::log(lo), lhi = std::log(hi);
  std::vector<double> w(n);
  for (auto& wi : w) wi = std::exp(llo + uniform01(eng) * (lhi - llo));
  return w;
}

}  // namespace qfcert

#endif  // QFCERT_SAMPLING_HPP
