// Synthesizes a controller for the 4-point DFT, checks it against the
// numerical holonomy engines and prints the per-mode circle geometry.

#include <cstdio>

#include "holo/holo.hpp"

int main() {
  using namespace holo;

  const UnitaryGate gate = gate_catalog("dft", {.k = 4});
  const SynthesisReport report = synthesize(gate);
  std::printf("%s: length %.12f, |Gamma - U| = %.2e, passed = %d\n", gate.label().c_str(), report.length,
              report.holonomy_error, report.passed);

  const ExtremalCurve curve(report.controller);
  const CMatrix gamma = analytic_holonomy(curve).gamma;

  const FramePath twisted = gauge_twisted_sample(curve, moving_mode_twist(report.spectrum), 2000);
  const HolonomyReport product = ordered_product_holonomy(twisted);
  std::printf("ordered product (n = 2000): |Gamma_n - Gamma| = %.2e\n", (product.gamma - gamma).norm());

  const FramePath path = curve.sample(4000);
  for (Index j = 0; j < gate.k(); ++j) {
    const auto loop = mode_bloch_loop(path, report.spectrum.rotation, j);
    const double angle = accumulate_solid_angle(loop).accumulated.back();
    std::printf("mode %td: gamma = %.6f, solid angle = %.6f (2 gamma = %.6f)\n", j,
                report.spectrum.gammas[static_cast<std::size_t>(j)], angle,
                2.0 * report.spectrum.gammas[static_cast<std::size_t>(j)]);
  }
}
