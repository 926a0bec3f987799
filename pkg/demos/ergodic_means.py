"""Cesaro means of e_1 approach the constant sequence in the weighted sup-norm."""
import numpy as np

from cesarolab import gallery
from cesarolab.dynamics import cesaro_means

e1 = np.zeros(64)
e1[0] = 1
report = cesaro_means(gallery("remark-3.9"), 1, e1, [2 ** k for k in range(4, 12)])
for k, dist, ratio in report.rows():
    print(f"k={k:5d}  distance={dist:.3e}  norm ratio={ratio:.3f}")
print("halving:", report.halving_ok, " eventually decreasing:", report.eventually_decreasing)
