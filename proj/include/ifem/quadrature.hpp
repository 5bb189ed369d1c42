#pragma once

#include <vector>

namespace ifem {

struct GaussRule {
    std::vector<double> x;  // nodes on [0,1]
    std::vector<double> w;  // weights summing to 1
};

/// Gauss-Legendre rule with n points, mapped to [0,1].
const GaussRule& gauss_legendre(int n);

}  // namespace ifem
