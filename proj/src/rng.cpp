#include "abvr/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace abvr {

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  return splitmix64(h ^ splitmix64(index));
}

Engine make_engine(std::uint64_t master, Stream stream, std::uint64_t index) {
  const std::uint64_t s = derive_seed(master, stream, index);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return Engine(seq);
}

double standard_normal(Engine& engine) {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine);
}

std::size_t uniform_index(Engine& engine, std::size_t bound) {
  boost::random::uniform_int_distribution<std::size_t> dist(0, bound - 1);
  return dist(engine);
}

void choose_subset(Engine& engine, std::span<std::uint8_t> flags, std::size_t count) {
  const std::size_t n = flags.size();
  if (count > n) throw std::invalid_argument("choose_subset: count exceeds size");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_index(engine, n - i);
    std::swap(order[i], order[j]);
  }
  std::fill(flags.begin(), flags.end(), std::uint8_t{0});
  for (std::size_t i = 0; i < count; ++i) flags[order[i]] = 1;
}

}  // namespace abvr
