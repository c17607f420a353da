// Fit exp(-x) on the half-line from its moments, then drop the two least
// useful terms, all without forming or inverting a Gram matrix.

#include <cmath>
#include <cstdio>

#include "biorth/biorth.hpp"
#include "biorth/regress.hpp"

int main()
{
    using namespace biorth;

    const FamilySpec fam = FamilySpec::laguerre();
    const unsigned k = 10;
    const MomentVector mu = moments_expdecay(1.0, fam.space(), k);
    const auto target = [](double x) { return std::exp(-x); };

    for (unsigned removals : {0u, 2u}) {
        const FitModel m = fit(fam, k, mu, removals);
        std::printf("%u removals: %u terms, L2 error %.3e, max error on [0,10] %.3e\n", removals, m.n_params(),
                    l2_error(m, target, fam.space()), max_abs_error(m, target, 0.0, 10.0));
        for (const auto& step : m.removals) std::printf("  dropped x^%u (score %.3e)\n", step.exponent, step.score);
    }

    // The same set grows by one order without rebuilding.
    const BiorthSet s = upgrade(build(fam, 1));
    for (unsigned n : s.active()) std::printf("beta_%u = %s\n", n, s.beta(n).to_string().c_str());
}
