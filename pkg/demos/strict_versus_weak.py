"""When does P(X >= li L(u)) <= exp(-u) fail?

The strict version P(X > li L(u)) <= exp(-u) always holds.  The weak one
fails exactly when the support has a top atom x_max of mass p_max > 0 and
u > -ln p_max.  A fair coin shows both regimes.
"""

import math

from fenchelinv import Bernoulli, cgf, lower_inverse, strictness_check

coin = Bernoulli(0.5)
L = cgf(coin)
print(f"-ln p_max = {-math.log(0.5):.4f}")
for u in (0.3, 0.6, math.log(2), 0.8, 1.0, 2.0):
    q = lower_inverse(L, u)
    weak, strict = coin.tail(q, strict=False), coin.tail(q, strict=True)
    print(f"u={u:.4f}  li={q:.4f}  P(X>li)={strict:.3f}  P(X>=li)={weak:.3f}  "
          f"exp(-u)={math.exp(-u):.3f}  {strictness_check(coin, u).value}")
