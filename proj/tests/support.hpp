#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <vector>

#include "emu/emu.hpp"

namespace emu::test {

struct RandomScenario {
  std::shared_ptr<const MeasureSpace> space;
  Partition part;
};

inline std::shared_ptr<const MeasureSpace> random_space(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& x : w) x = rng.log_uniform(0.1, 10.0);
  return std::make_shared<const MeasureSpace>(std::move(w));
}

// Shuffled atoms cut into `blocks` nonempty runs.
inline Partition random_partition(Rng& rng, std::shared_ptr<const MeasureSpace> space, std::size_t blocks) {
  const std::size_t n = space->size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
  std::vector<std::size_t> cuts;
  for (std::size_t i = 1; i < n; ++i) cuts.push_back(i);
  for (std::size_t i = cuts.size(); i > 1; --i) std::swap(cuts[i - 1], cuts[rng.index(i)]);
  cuts.resize(blocks - 1);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);
  std::vector<std::vector<std::size_t>> out;
  std::size_t start = 0;
  for (std::size_t c : cuts) {
    out.emplace_back(idx.begin() + static_cast<std::ptrdiff_t>(start), idx.begin() + static_cast<std::ptrdiff_t>(c));
    start = c;
  }
  return Partition(std::move(space), std::move(out));
}

inline RandomScenario random_scenario(Rng& rng, std::size_t max_atoms = 12) {
  const std::size_t n = 1 + rng.index(max_atoms);
  auto space = random_space(rng, n);
  const std::size_t blocks = 1 + rng.index(n);
  auto part = random_partition(rng, space, blocks);
  return {std::move(space), std::move(part)};
}

inline SimpleFunction values(const MeasureSpace& space, std::vector<double> v) {
  return SimpleFunction(space, std::move(v));
}

}  // namespace emu::test
