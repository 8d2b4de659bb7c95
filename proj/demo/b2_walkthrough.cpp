// Walks the B2 pattern with d = (2,1): seeds, C/G-matrices and F-polynomials
// along the word (1,2,1,2,1,2), then the separation formula for y.
#include <iostream>

#include "gencluster/pattern.hpp"

using namespace gencluster;

int main() {
  const ExchangeMatrix b{{0, -1}, {1, 0}};
  const std::vector<int> d{2, 1};
  auto universal = universal_pattern(b, d);
  auto principal = principal_pattern(b, d);

  MutationWord w;
  for (int t = 1; t <= 7; ++t) {
    const auto seed = universal->seed_at(w);
    std::cout << "t = " << t << "  word " << word_to_string(w) << "\n";
    for (int i = 0; i < 2; ++i) std::cout << "  x" << i + 1 << " = " << seed->x()[i].to_string() << "\n";
    for (int i = 0; i < 2; ++i) std::cout << "  y" << i + 1 << " = " << seed->y()[i].to_string() << "\n";
    std::cout << "  C = " << c_matrix(*principal, w).to_string() << "  G = " << g_matrix(*principal, w).to_string()
              << "\n";
    const auto f = f_polynomials(*principal, w);
    for (std::size_t i = 0; i < f.size(); ++i) std::cout << "  F" << i + 1 << " = " << f[i].to_string() << "\n";
    w.push_back(t % 2 == 1 ? 0 : 1);
  }
  std::cout << "returns to the initial seed: " << std::boolalpha
            << (*universal->seed_at({0, 1, 0, 1, 0, 1}) == universal->initial()) << "\n";
}
