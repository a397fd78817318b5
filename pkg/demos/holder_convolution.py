"""The Hölder convolution turns sums of inverses into one inverse.

For rate functions L1, L2 the convolution L1 # L2 satisfies
li(L1 # L2) = li L1 + li L2.  With Gaussian CGFs everything is explicit:
li L(u) = mu + sigma sqrt(2u).
"""

import math

from fenchelinv import Gaussian, Poisson, as_ratefn, cgf, holder_convolve, lower_inverse, power

# power functions: ((a t)^r) # ((b t)^r) = ((a + b) t)^r
for r in (1, 2, 3):
    v = holder_convolve([power(r, 1.0), power(r, 2.0)], 1.5)
    print(f"r={r}: convolution {v:.10f}   closed form {(3.0 * 1.5) ** r:.10f}")

g1, g2 = Gaussian(0.0, 1.0), Gaussian(1.0, 2.0)
H = as_ratefn([cgf(g1), cgf(g2)])
for u in (0.5, 1.0, 2.0):
    exact = g1.mu + g2.mu + (g1.sigma + g2.sigma) * math.sqrt(2 * u)
    print(f"u={u}: li(H) = {lower_inverse(H, u):.10f}   sum of closed forms {exact:.10f}")

# the same identity with no closed form on either side
H = as_ratefn([cgf(Poisson(2.0)), cgf(Gaussian(0, 1))])
u = 1.5
pieces = lower_inverse(cgf(Poisson(2.0)), u) + lower_inverse(cgf(Gaussian(0, 1)), u)
print(f"poisson + gaussian at u={u}: {lower_inverse(H, u):.10f} vs {pieces:.10f}")
