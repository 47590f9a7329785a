# %% [markdown]
# # Counting points through a conic bundle
#
# Reduce a cubic mod 2 and pick a line on it.  Projecting from the line
# fibres X over P^3 in conics, so #X(F_q) = q^4 + q^3 + q S + q + 1, where S
# sums a small correction over the discriminant quintic.  The cover method
# parametrizes that quintic by lines through a double point.

# %%
import time

from cubic4 import counter, datasets
from cubic4.gf2m import FieldCtx

ds = datasets.load("thm1")
f = ds.reduction()
lines = counter.find_lines_F2(f)
print(len(lines), "lines over F_2; using", lines[0])

# %%
bundle = counter.bundle_for(f)
print("discriminant has", len(bundle.discriminant().support), "monomials")
print("cover center", counter.find_cover_center(bundle))

# %% [markdown]
# Cross-check the four counters at small m.

# %%
for m in (1, 2, 3):
    print(m, {meth: counter.count_points(f, m, meth).count for meth in counter.METHODS})

# %% [markdown]
# The cover method gets to F_{2^11} in about a second.

# %%
t0 = time.perf_counter()
records = counter.count_series(f, range(1, 12))
for rec in records:
    print(rec.tsv())
print("matches shipped table:", [r.count for r in records] == ds.counts, f"({time.perf_counter() - t0:.1f}s)")

# %% [markdown]
# The count does not depend on the field model or the thread count.

# %%
print({mod: counter.count_conic_cover(bundle, FieldCtx(7, mod), threads=2).count for mod in (131, 137)})
