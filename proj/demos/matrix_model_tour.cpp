// Builds the matrix model C in M_3, evaluates F on e1 and the unit, and runs a short suite.
#include <iostream>

#include "ncf/ncf.hpp"

int main() {
  using namespace ncf;
  auto ctx = build_context(matrix_pair_model(1, 3));
  std::cout << ctx->description << ": delta^2 = " << ctx->delta2() << ", kappa_0 = " << ctx->kappa << "\n";

  const JonesTower& t = *ctx->tower;
  ComplexMatrix fe1 = fourier(*ctx, t.e1);
  std::cout << "F(e1) = (1/3) 1 up to " << max_abs(fe1 - identity(fe1.rows()) / 3.0) << "\n";
  std::cout << "S(e1) S(F(e1)) = " << support(*ctx, t.e1) * support(*ctx, fe1)
            << " >= kappa_0^2 / delta^2 = " << ctx->kappa * ctx->kappa / ctx->delta2() << "\n";

  ComplexMatrix one = identity(ctx->plus.ambient_dim());
  auto trp = ctx->tr_plus();
  std::cout << "||1 * 1||_2 = " << schatten_norm(convolve(*ctx, one, one), 2.0, trp)
            << ", Young constant delta / kappa_0^+ = " << ctx->delta / ctx->kappa_plus << "\n";

  SampleSpec spec;
  spec.model = matrix_pair_model(1, 3);
  spec.trials = 24;
  spec.keep_records = false;
  SuiteReport rep = run_suite(spec, ctx);
  std::cout << rep.record_count << " checks, " << rep.violations << " violations\n";
  for (const char* name : {"hausdorff_young.upper[p=4]", "young[p=2,q=1]", "donoho_stark", "hirschman_beckner"}) {
    const auto& a = rep.aggregates.at(name);
    std::cout << "  " << name << ": min margin " << a.min_margin << "\n";
  }
  return rep.violations == 0 ? 0 : 1;
}
