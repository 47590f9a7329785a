# %% [markdown]
# # From point counts to a Picard bound
#
# Each count gives a trace of Frobenius on the 22-dimensional primitive part.
# Newton's identities turn eleven traces into half of the characteristic
# polynomial.  The functional equation supplies the rest, up to a sign that the
# unit-circle condition or one more count decides.

# %%
from cubic4 import datasets, zeta

ds = datasets.load("thm2")
tr = zeta.traces_from_counts(ds.counts)
print("traces:", [str(t) for t in tr.traces])

# %%
chi = zeta.charpoly_from_counts(ds.counts)
print(chi)
print("matches shipped polynomial:", chi.high_first() == ds.charpoly)
print("max | |root| - 1 |:", zeta.unit_circle_deviation(chi))

# %% [markdown]
# Algebraic classes in the primitive lattice would show up as roots of unity.
# No cyclotomic factor means the rank bound is zero.

# %%
print("cyclotomic factors:", zeta.cyclotomic_factors(chi))
print("irreducible:", zeta.irreducibility_modular(chi).status)
print("integrality:", zeta.integrality_checks(chi))

# %% [markdown]
# The polynomial predicts every later count.  Here it predicts m = 12, which
# the cover counter confirms in a few seconds.

# %%
from cubic4 import counter

pred = zeta.predict_count(chi, 12)
print(pred, counter.count_points(ds.reduction(), 12).count == pred)

# %%
report = zeta.nl_verdict(chi, ds.counts)
print(report["rank_bound"], report["verdict"])
