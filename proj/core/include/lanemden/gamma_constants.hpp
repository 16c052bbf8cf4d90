#pragma once

namespace lanemden {

// gamma1 = a^{p+1} int (1+|y|^2)^{-n}
// gamma2 = a^{p+1} int (1+|y|^2)^{-(n+2)/2}
// gamma3 = a^{p+1} int (1+|y|^2)^{-n} log (1+|y|^2)^{-(n-2)/2}
// with a = alpha_n and integrals over R^n.
struct GammaConstants {
  int n = 3;
  double gamma1 = 0.0, gamma2 = 0.0, gamma3 = 0.0;

  void validate() const;
};

// Radial adaptive quadrature to the requested relative accuracy.
GammaConstants gamma_constants(int n, double rel_tol = 1e-10);

// Gamma/digamma closed forms:
//   int (1+|y|^2)^{-s} dy = pi^{n/2} Gamma(s - n/2) / Gamma(s)
//   int (1+|y|^2)^{-n} log(1+|y|^2) dy = [same at s = n] (psi(n) - psi(n/2))
GammaConstants gamma_constants_closed_form(int n);

}  // namespace lanemden
