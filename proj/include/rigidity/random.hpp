#ifndef RIGIDITY_RANDOM_HPP
#define RIGIDITY_RANDOM_HPP

#include <cstdint>
#include <random>
#include <stdexcept>

#include "rigidity/coloured_graph.hpp"

namespace rigidity {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// fixed arithmetic for deriving independent sub-seeds from a master seed
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 1));
}

// deterministic draws independent of the standard library's distribution internals
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t u64() { return gen_(); }

  int below(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::below needs a positive bound");
    std::uint64_t bound = static_cast<std::uint64_t>(n);
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = u64();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

  int range(int lo, int hi) { return lo + below(hi - lo + 1); }  // inclusive

  double real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  double real(double lo, double hi) { return lo + (hi - lo) * real(); }

  bool coin() { return (u64() & 1) != 0; }

  Colour colour() { return coin() ? Colour::red : Colour::blue; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rigidity

#endif
