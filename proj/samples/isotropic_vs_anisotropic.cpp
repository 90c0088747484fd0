// Block entropy of a quarter of the chain across the field h, for the
// isotropic (gamma = 1) and fully anisotropic (gamma = 0) models, next to the
// isotropic closed form.

#include <cstdio>

#include "lmg/lmg.hpp"

int main() {
  const int n = 500;
  const int l = n / 4;
  std::printf("%6s %14s %14s %14s\n", "h", "S(gamma=0)", "S(gamma=1)", "closed form");
  for (int k = 0; k <= 15; ++k) {
    const double h = 0.1 * k;
    const double anisotropic = lmg::evaluate_point(n, l, 0.0, h).record.entropy_bits;
    const double isotropic = lmg::evaluate_point(n, l, 1.0, h).record.entropy_bits;
    const double closed = lmg::isotropic_entropy(n, l, h);
    std::printf("%6.3f %14.8f %14.8f %14.8f\n", h, anisotropic, isotropic, closed);
  }
  return 0;
}
