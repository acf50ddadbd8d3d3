// SPDX-License-Identifier: Apache-2.0
//
// Scalar special functions needed by the closed-form layer: Gamma/Beta,
// the Tricomi confluent hypergeometric U, the regularized incomplete gamma
// tail, and the Gaussian Q function.

#ifndef SICPERF_SPECFUN_HPP
#define SICPERF_SPECFUN_HPP

namespace sicperf {

struct tricomi_params {
    double a;  // > 0
    double b;  // any real
    double x;  // > 0
};

// Gamma function for x > 0. Throws std::invalid_argument for x <= 0.
double gamma_real(double x);

// log Gamma for x > 0 (used by the log-domain coefficient expansion).
double lgamma_real(double x);

// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b).
double beta_real(double a, double b);

// Tricomi confluent hypergeometric function
//   U(a,b,x) = (1/Gamma(a)) \int_0^inf e^{-xt} t^{a-1} (1+t)^{b-a-1} dt
// evaluated by adaptive quadrature of the defining integral after the
// compactifying substitutions t = u/(1-u), u = v^2. Target 1e-8 relative.
// Throws std::invalid_argument outside a > 0, x > 0 and std::runtime_error
// if the refinement budget is exhausted before convergence.
double tricomi_u(const tricomi_params& p);

// Regularized upper incomplete gamma Q(k, x) = Gamma(k, x)/Gamma(k).
// For integer k this is the Erlang tail e^{-x} sum_{j<k} x^j/j!.
double regularized_gamma_q(double k, double x);

// Regularized lower incomplete gamma P(k, x) = 1 - Q(k, x), computed
// directly (no cancellation for small x).
double regularized_gamma_p(double k, double x);

// Gaussian tail Q(x) = 0.5 erfc(x/sqrt(2)).
double gaussian_q(double x);

}  // namespace sicperf

#endif
