// Prints the membrane/atom occupation exchange at the reference point, with and
// without dissipation, as CSV on stdout.
#include <cstdio>
#include <cstdlib>

#include "hybridmech.hpp"

int main(int argc, char** argv) {
    using namespace hybridmech;
    const double n0 = argc > 1 ? std::atof(argv[1]) : 10.0;
    const RateSet r = full_rates(table1_system());
    const ExchangeSeries x = exchange_demo(r, n0, 301);
    std::printf("t,n_m_noiseless,n_at_noiseless,n_m_noisy,n_at_noisy\n");
    for (std::size_t i = 0; i < x.t.size(); ++i) {
        std::printf("%.9g,%.6f,%.6f,%.6f,%.6f\n", x.t[i], x.n_m_noiseless[i], x.n_at_noiseless[i],
                    x.n_m_noisy[i], x.n_at_noisy[i]);
    }
}
