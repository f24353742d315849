#include "mnlmix/rng.hpp"

#include <cmath>

namespace mnlmix {
namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t hash_items(const std::vector<int>& items) {
  std::uint64_t h = mix64(0x51a7e5ULL + items.size());
  for (int i : items) h = mix64(h ^ (static_cast<std::uint64_t>(i) + kGolden));
  return h;
}

Rng::Rng(std::uint64_t seed) : key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

std::uint64_t Rng::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::exponential() { return -std::log(uniform()); }

Rng Rng::split(std::uint64_t tag) const {
  Rng child(0);
  child.key_ = mix64(key_ ^ mix64(tag + kGolden));
  return child;
}

Rng Rng::split(std::string_view tag) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) h = (h ^ c) * 0x100000001b3ULL;
  return split(h);
}

}  // namespace mnlmix
