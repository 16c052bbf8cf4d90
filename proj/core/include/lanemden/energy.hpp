#pragma once

#include "lanemden/field.hpp"

namespace lanemden {

// f_eps(s) = |s|^{p-1-eps} s, with f(0) = f'(0) = 0.
double nonlinearity(double s, double exponent);
double nonlinearity_derivative(double s, double exponent);

struct EnergyParts {
  double gradient = 0.0;   // int |grad u|^2
  double potential = 0.0;  // int |u|^{p+1-eps} / (2|x|)
  double total = 0.0;      // J_eps(u)
};

// Discrete J_eps(u) = 1/2 int |grad u|^2 - 1/(p+1-eps) int |u|^{p+1-eps}/(2|x|)
// with the finite-volume Dirichlet form and lumped volume weights.
EnergyParts energy_parts(const MeridianField& u, double eps);
double energy(const MeridianField& u, double eps);

}  // namespace lanemden
