"""log Z / alpha approaches the Tracy-Widom GUE law as alpha grows.

The largest decorated point dominates the sum once alpha is large; the gap is
of order log(weight)/alpha, so at moderate alpha the KS distance to F_2 is
still visible.
"""

import numpy as np

from kpzlab.battery import kpz_samples
from kpzlab.fredholm import tracy_widom_f2, tracy_widom_f2_moments


def ks_to_f2(x):
    x = np.sort(x)
    f = tracy_widom_f2(np.clip(x, -10, 6))
    n = x.size
    return max(np.max(np.arange(1, n + 1) / n - f), np.max(f - np.arange(n) / n))


mean, var = tracy_widom_f2_moments()
print(f"F2 mean {mean:.6f}, variance {var:.6f}")

for alpha in (1, 2, 4, 8, 16):
    v, _ = kpz_samples(2, float(alpha), 2000, seed=100 + alpha)
    x = np.log(v) / alpha
    print(f"alpha {alpha:2d}: mean {x.mean():+.3f}  var {x.var():.3f}  KS distance to F2 {ks_to_f2(x):.3f}")

# table of F2 for plotting
s = np.linspace(-6, 2, 9)
for si, fi in zip(s, tracy_widom_f2(s)):
    print(f"{si:5.1f} {fi:.6f}")
