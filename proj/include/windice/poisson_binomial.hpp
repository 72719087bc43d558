#pragma once

#include <vector>

#include "windice/scalar.hpp"

namespace windice {

// pmf of the number of successes among independent Bernoulli trials with the
// given success probabilities, by the standard convolution dynamic program.
template <class S>
std::vector<S> poisson_binomial_pmf(const std::vector<S>& params) {
    std::vector<S> pmf(params.size() + 1, scalar_traits<S>::zero());
    pmf[0] = scalar_traits<S>::one();
    size_t used = 0;
    for (const S& p : params) {
        ++used;
        for (size_t k = used; k-- > 0;) {
            S stay = pmf[k] * (scalar_traits<S>::one() - p);
            pmf[k + 1] += pmf[k] * p;
            pmf[k] = stay;
        }
    }
    return pmf;
}

}  // namespace windice
