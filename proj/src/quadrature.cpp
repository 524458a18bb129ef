#include "nli/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nli::quad {

const Gk21Rule& gk21() {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    static const Gk21Rule rule{
        std::span<const double>(Kronrod::abscissa().data(), Kronrod::abscissa().size()),
        std::span<const double>(Kronrod::weights().data(), Kronrod::weights().size()),
        std::span<const double>(Gauss::weights().data(), Gauss::weights().size()),
    };
    return rule;
}

}  // namespace nli::quad
