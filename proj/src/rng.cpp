#include "cpath/rng.hpp"

#include <cmath>
#include <numbers>

namespace cpath {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : state_) word = splitmix64(sm);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling over the low-bias range, arc4random_uniform style.
  const std::uint64_t min = (0ULL - bound) % bound;
  std::uint64_t x;
  do {
    x = next();
  } while (x < min);
  return x % bound;
}

bool Rng::bernoulli(double prob) { return uniform() < prob; }

double Rng::normal(double mean, double sd) {
  // Both uniforms are always drawn; no cached spare, so the stream position
  // after a call never depends on call history.
  const double u1 = 1.0 - uniform();  // (0, 1], safe for log
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return mean + sd * radius * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t sm = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
  std::uint64_t out = splitmix64(sm);
  return out ^ splitmix64(sm);
}

}  // namespace cpath
