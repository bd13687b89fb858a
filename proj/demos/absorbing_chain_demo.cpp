// Walkthrough of the library on the absorbing-chain example: a system whose
// microscale is noisy and weakly informative, but whose two-state macroscale
// is a perfect bit.

#include <cstdio>

#include "emergence/emergence.hpp"

int main() {
    using namespace emergence;

    const Tpm micro = fixture_tpm("absorbing8");
    const CausalReport report = full_report(micro);
    std::printf("microscale: ei = %.4f bits (size %.0f, eff %.4f)\n", report.ei,
                report.size, report.effectiveness);

    // group the seven transient states into one macrostate
    const ModelChoice grouping = fixture_choice("absorbing8");
    const CausalReport macro = macro_ei(micro, grouping);
    std::printf("macroscale: ei = %.4f bits over %d states\n", macro.ei,
                grouping.macro_count());
    std::printf("causal emergence: %.4f bits\n", macro.ei - report.ei);

    // the search lands on the same grouping without being told
    const SearchResult best = exhaustive_search(micro, LadderLevel::CoarseGrain);
    std::printf("search over %llu coarse-grainings: ei_max = %.4f\n",
                static_cast<unsigned long long>(best.evaluated), best.best_ei);

    // and the macroscale uses the full channel capacity
    const CapacityResult cap = blahut_arimoto(micro);
    std::printf("channel capacity: %.4f bits (input entropy %.4f)\n", cap.capacity,
                entropy(cap.optimal_input));
    return 0;
}
