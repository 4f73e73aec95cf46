// Decoherence-to-coupling ratios against finesse, and the finesse that minimizes their sum.
#include <cstdio>

#include "hybridmech.hpp"

int main() {
    using namespace hybridmech;
    SweepSpec spec;
    spec.axis1 = {SweepParam::Finesse, 50.0, 1000.0, 20, AxisScale::Log};
    const SweepResult res = sweep_coherent(spec);
    std::printf("%10s %12s %12s %12s %12s\n", "finesse", "at_diff/g", "m_diff/g", "m_th/g", "Gamma/g");
    for (const auto& rec : res.records) {
        std::printf("%10.1f %12.4f %12.4f %12.4f %12.4f\n", rec.x1, rec.ratio_at, rec.ratio_mdiff,
                    rec.ratio_mth, rec.ratio_total);
    }
    const OptimumRecord best =
        optimize(Objective::MinTotalRatio, {{SweepParam::Finesse, 50.0, 1000.0, AxisScale::Log}}, spec);
    std::printf("\noptimum: finesse %.1f, Gamma/g %.4f\n", best.x[0], best.value);
}
