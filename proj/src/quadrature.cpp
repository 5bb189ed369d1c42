#include "ifem/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace ifem {

// Newton iteration on Legendre polynomials, then map [-1,1] -> [0,1].
const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");

    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.x[i] = 0.5 * (1.0 - z);  // roots come out descending in z
        rule.w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace ifem
