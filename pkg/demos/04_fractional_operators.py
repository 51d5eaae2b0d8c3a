"""A look at the quadrature behind the fractional-calculus oracle.

The discrete maps come from kicked equations with a Caputo derivative. That
derivative can be checked independently on power functions, where the answer
is known in closed form, and by integrating a Caputo derivative back with the
Riemann-Liouville integral of the same order.
"""

from memkick.fractional_oracle import SampledFunction, caputo_derivative, inverse_property_check, rl_integral
from memkick.special_fn import gamma

print("Caputo derivative of t^2 at t = 1.5")
for alpha in (0.2, 0.5, 0.8, 0.999, 1.0):
    num = caputo_derivative(SampledFunction.power(2), alpha, 1.5)
    exact = 2.0 / gamma(3.0 - alpha) * 1.5 ** (2.0 - alpha)
    print(f"  alpha={alpha:<6} quadrature {num:.10f}   closed form {exact:.10f}")
print("  (as alpha approaches one the value approaches the ordinary derivative 3.0)")

print("\nRiemann-Liouville integral of the constant 1 over [0, t]:")
for t in (0.5, 1.0, 4.0):
    print(f"  t={t}: {rl_integral(SampledFunction.constant(1.0), 0.5, t):.10f}"
          f"  vs t^0.5/Gamma(1.5) = {t ** 0.5 / gamma(1.5):.10f}")

res = inverse_property_check(SampledFunction.power(2), 0.5, 1.0)
print(f"\nintegrating the derivative of t^2 back recovers f(t) - f(0) up to {abs(res):.1e}")
