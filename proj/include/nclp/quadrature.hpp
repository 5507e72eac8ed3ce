#pragma once

#include <functional>
#include <vector>

namespace nclp {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss–Legendre rule via Golub–Welsch.
GaussRule gauss_legendre(int n);

// Composite rule: `panels` equal subintervals of [a, b], `rule` on each.
double integrate(const std::function<double(double)>& f, double a, double b, int panels, const GaussRule& rule);

}  // namespace nclp
