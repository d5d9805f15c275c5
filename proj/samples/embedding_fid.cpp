// FID between two PADEMB1 embedding files, or between two synthetic Gaussian
// sets when called without arguments.

#include <cstdio>
#include <iostream>
#include <random>

#include "padbench/padbench.hpp"

namespace {

padbench::EmbeddingSet gaussian(std::mt19937_64& rng, std::uint32_t n, std::uint32_t d, double mean) {
  padbench::EmbeddingSet e{n, d, std::vector<float>(static_cast<std::size_t>(n) * d)};
  std::normal_distribution<float> g(static_cast<float>(mean), 1.0F);
  for (auto& v : e.data) v = g(rng);
  return e;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    padbench::EmbeddingSet a, b;
    if (argc == 3) {
      a = padbench::read_embeddings(argv[1]);
      b = padbench::read_embeddings(argv[2]);
    } else {
      std::mt19937_64 rng(1);
      a = gaussian(rng, 500, 16, 0.0);
      b = gaussian(rng, 500, 16, 0.5);
    }
    const double fid = padbench::frechet_distance(padbench::gaussian_stats(a), padbench::gaussian_stats(b));
    std::printf("%.6f\n", fid);
  } catch (const padbench::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
