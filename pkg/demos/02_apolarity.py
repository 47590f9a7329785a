# %% [markdown]
# # Apolarity certificates
#
# A quadric h in y0..y5 acts on a cubic f as a differential operator.  A cubic
# annihilated by every generator of an ideal is apolar to it.  The three
# shipped cubics are apolar to the Veronese ideal, the ideal of a quartic scroll
# and a rank-3 ideal respectively.

# %%
from cubic4 import datasets
from cubic4.qpoly import R_VARS, apolarity_pair, is_apolar, mvee, parse_poly
from cubic4.verify import structure_checks

paper = datasets.load_all()
f = paper["thm1"].cubic
print(len(f.terms), "terms; first few:", str(f)[:80], "...")

# %% [markdown]
# The pairing itself: x0^2 applied to x0^2 gives 2, and mismatched
# monomials give 0.

# %%
X = lambda s: parse_poly(s, R_VARS)
print(apolarity_pair(X("x0^2"), X("x0^2")), apolarity_pair(X("x0^2"), X("x1^2")))

# %% [markdown]
# ## The first cubic from a plane sextic
#
# mvee is the transpose of pulling cubics back along the Veronese map.  It takes a
# ternary sextic g to a cubic on P^5.

# %%
g = paper["thm1"].sextic
print("mvee(g) == f:", mvee(g) == f)

# %% [markdown]
# is_apolar returns a truthy result.  On failure it names the first generator
# that does not annihilate f.

# %%
for name, ds in paper.items():
    res = is_apolar(ds.cubic, ds.ideal)
    print(name, bool(res), len(ds.ideal), "generators")

bad = is_apolar(paper["thm3"].cubic, paper["thm1"].ideal)
print("thm3 against the Veronese ideal:", bool(bad), "witness", bad.witness)

# %% [markdown]
# structure_checks bundles these with the line and good-reduction checks.

# %%
for check in structure_checks(paper["thm2"]).checks:
    print(check.line())
