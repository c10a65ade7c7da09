#pragma once

#include <complex>

namespace helispin {

using cplx = std::complex<double>;

// Normalized two-component state on the |up>, |down> z-basis.
class Spinor {
  public:
    Spinor() = default;  // |up>

    // Throws DomainError when | ||psi|| - 1 | > 1e-10.
    Spinor(cplx up, cplx down);

    // Skips the normalization check. Used for Richardson extrapolants, which
    // are unitary only up to the extrapolation error.
    static Spinor unchecked(cplx up, cplx down) noexcept;

    static Spinor spin_up() noexcept { return {}; }
    static Spinor spin_down() noexcept { return unchecked({0.0, 0.0}, {1.0, 0.0}); }

    cplx up() const noexcept { return up_; }
    cplx down() const noexcept { return down_; }

    double norm() const noexcept;

  private:
    cplx up_{1.0, 0.0};
    cplx down_{0.0, 0.0};
};

// <a|b>
cplx overlap(const Spinor& a, const Spinor& b) noexcept;

}  // namespace helispin
