#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

namespace mnlmix {

// Counter-based generator: output i is splitmix64(key + i * golden).
// Streams are derived by hashing a tag into the key, so a stream depends only
// on (seed, tag path) and not on how many draws other streams made.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next();
  // Uniform on the open interval (0, 1).
  double uniform();
  double exponential();

  Rng split(std::uint64_t tag) const;
  Rng split(std::string_view tag) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_items(const std::vector<int>& items);

}  // namespace mnlmix
