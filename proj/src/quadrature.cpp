#include "pdmp/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pdmp::detail {

const Gk21Rule& gk21() {
  static const Gk21Rule rule = [] {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    Gk21Rule r{};
    for (std::size_t i = 0; i < 11; ++i) {
      r.nodes[i] = Kronrod::abscissa()[i];
      r.kronrod_weights[i] = Kronrod::weights()[i];
      // Gauss-10 nodes are the odd-indexed Kronrod nodes.
      r.gauss_weights[i] = (i % 2 == 1) ? Gauss::weights()[i / 2] : 0.0;
    }
    return r;
  }();
  return rule;
}

}  // namespace pdmp::detail
