#include "helispin/spinor.hpp"

#include <cmath>

#include "helispin/errors.hpp"

namespace helispin {

Spinor::Spinor(cplx up, cplx down) : up_(up), down_(down) {
    if (std::abs(norm() - 1.0) > 1e-10) throw DomainError("spinor must be normalized");
}

Spinor Spinor::unchecked(cplx up, cplx down) noexcept {
    Spinor s;
    s.up_ = up;
    s.down_ = down;
    return s;
}

double Spinor::norm() const noexcept { return std::sqrt(std::norm(up_) + std::norm(down_)); }

cplx overlap(const Spinor& a, const Spinor& b) noexcept {
    return std::conj(a.up()) * b.up() + std::conj(a.down()) * b.down();
}

}  // namespace helispin
