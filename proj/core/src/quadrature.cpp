#include "heun/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace heun {

const QuadratureRule& gauss_legendre_32() {
  static const QuadratureRule rule = [] {
    // Boost stores the non-negative half of the symmetric rule.
    using G = boost::math::quadrature::gauss<double, 32>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    QuadratureRule r;
    for (std::size_t k = x.size(); k-- > 0;) {
      r.nodes.push_back(-x[k]);
      r.weights.push_back(w[k]);
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
      r.nodes.push_back(x[k]);
      r.weights.push_back(w[k]);
    }
    return r;
  }();
  return rule;
}

}  // namespace heun
