#ifndef MCH_SPECIAL_HPP
#define MCH_SPECIAL_HPP

// Scalar special functions used by the channel expressions and the detector.

namespace mch {

// Scaled complementary error function exp(x^2) erfc(x), stable for large x.
double erfcx(double x);

// Zeroth-order spherical Bessel function sin(z)/z, with a series branch
// near z = 0 where the quotient loses accuracy.
double sphere_j0(double z);

// d/dz of sphere_j0: cos(z)/z - sin(z)/z^2.
double sphere_j0_prime(double z);

// Regularized incomplete gamma functions P(a,x) and Q(a,x), a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Poisson tail probabilities for N ~ Poisson(mean), integer threshold omega >= 0.
//   poisson_cdf_below(omega, mean)  = Pr(N < omega)
//   poisson_tail_at_least(omega, mean) = Pr(N >= omega)
// Uses the regularized incomplete gamma identity; switches to a normal
// approximation with continuity correction for mean > 700.
double poisson_cdf_below(long long omega, double mean);
double poisson_tail_at_least(long long omega, double mean);

} // namespace mch

#endif
