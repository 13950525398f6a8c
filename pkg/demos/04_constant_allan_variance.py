"""Sequences whose non-overlapping Allan variance is exactly constant.

The deterministic sequence has unit bin-mean differences at every dyadic bin
size. The stochastic variant scales each square-wave level by a random draw;
its draws are recovered exactly through the pseudoinverse of K.
"""

import numpy as np
from _plot import maybe_plot

from gyrocarousel import Seed, allan_statistic, build_K, gen_R, gen_S, gray_code_matrix, pinv_apply

print("S for n = 1, 2, 3:")
for n in (1, 2, 3):
    print("  ", gen_S(n).values.tolist())

s = gen_S(11).values
print("\nAllan variance of S_2048 at dyadic bin sizes:", {2**i: float(allan_statistic(s, 2**i)) for i in range(0, 11, 2)})

K = build_K(4)
print("\nK(4) + 0.5 equals the reflected Gray code:", np.array_equal(K + 0.5, gray_code_matrix(4)))
print("diag(K K^T) for n = 4:", np.unique(np.diag(K @ K.T)))

n, R = 10, 10_000
seqs = np.stack([gen_R(n, Seed(5, 0).spawn(r)).values for r in range(R)])
two_avar = np.array([2 * allan_statistic(seqs, 2**i) for i in range(n)])
mvue = np.var(pinv_apply(seqs, n), axis=1, ddof=1)
print(f"\n{R} stochastic sequences of length {2**n}, unit-variance draws")
print("  mean of 2*avar per tau:", np.round(two_avar.mean(axis=1), 3).tolist())
print(f"  spread of 2*avar(1): {two_avar[0].std():.3f}   spread of the pseudoinverse estimate: {mvue.std():.3f}")

maybe_plot("04_s2048", lambda ax: ax.step(np.arange(s.size), s, lw=0.6))
