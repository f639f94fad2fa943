// The cyclic model: F is the DFT in orthonormal coordinates and both convolutions are the
// classical ones up to the scales printed here.
#include <iostream>

#include "ncf/ncf.hpp"
#include "ncf/report.hpp"

int main(int argc, char** argv) {
  using namespace ncf;
  Index k = argc > 1 ? std::stol(argv[1]) : 5;
  OracleReport rep = cyclic_oracle(k);
  std::cout << oracle_to_text(rep);

  auto ctx = build_cyclic(k);
  ComplexVector alpha = ComplexVector::Zero(k);
  alpha(1) = 1.0;
  ComplexMatrix x = ctx->plus.element(alpha);
  std::cout << "F(p_1) coefficients in the circulant basis:";
  ComplexVector f = ctx->minus.coordinates(fourier(*ctx, x));
  for (Index i = 0; i < k; ++i) std::cout << " " << f(i).real();
  std::cout << "\nrho_+(p_1) = p_" << (k - 1) % k << " up to "
            << max_abs(rho_plus(*ctx, x) - matrix_unit(k, k - 1, k - 1)) << "\n";
  for (const auto& a : ctx->assumptions) std::cout << "assumption: " << a << "\n";
  return rep.pass() ? 0 : 1;
}
