#pragma once

#include <type_traits>
#include <utility>

namespace pampa {

// 5-point Gauss-Legendre quadrature on [a, b]; exact for polynomials
// through degree 9.
template <class F>
auto gauss5(F&& f, double a, double b) {
    static constexpr double x1 = 0.5384693101056830910363144207002;
    static constexpr double x2 = 0.9061798459386639927976268782994;
    static constexpr double w0 = 128.0 / 225.0;
    static constexpr double w1 = 0.4786286704993664680412915148357;
    static constexpr double w2 = 0.2369268850561890875142640407199;

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    using V = std::decay_t<decltype(f(mid))>;
    V acc = w0 * f(mid);
    acc = acc + w1 * (f(mid - half * x1) + f(mid + half * x1));
    acc = acc + w2 * (f(mid - half * x2) + f(mid + half * x2));
    return V(half * acc);
}

template <class F>
auto cell_average(F&& f, double a, double b) {
    return gauss5(std::forward<F>(f), a, b) / (b - a);
}

}  // namespace pampa
