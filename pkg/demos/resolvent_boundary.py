"""Resolvent accuracy, then the row-sum evidence that separates the two disk shapes."""
from cesarolab import gallery
from cesarolab import sections as sx
from cesarolab.spectra import row_sum_evidence

for mu in (2, -1, 0.4 + 0.3j, 0.25 + 0.1j):
    R = sx.resolvent(mu, 300)
    print(f"mu={mu}: max |(C - mu I) R - I| = {sx.shifted_product_residual(mu, R):.2e}")

lam = 0.5 + 0.5j
for key in ("remark-4.4", "loglog-weights"):
    t = row_sum_evidence(gallery(key), lam, 1, 2, 2 ** 13)
    print(f"{key} at lambda={lam}: {t.classification}")
