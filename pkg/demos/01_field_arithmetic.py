# %% [markdown]
# # Arithmetic in F_{2^m}
#
# Field elements are plain Python ints (or int64 numpy arrays) whose bits are
# the coefficients of a polynomial in x modulo an irreducible of degree m.
# Up to m = 12 a FieldCtx builds log/exp tables and every vectorized
# operation becomes a table lookup.

# %%
import numpy as np

from cubic4.gf2m import FieldCtx, irreducibles

F = FieldCtx(8)
print(F, "modulus", bin(F.modulus))
a, b = 0x53, 0xCA
print("a*b =", hex(F.mul(a, b)), " a^-1 =", hex(F.inv(a)), " a*a^-1 =", F.mul(a, F.inv(a)))

# %% [markdown]
# The same operations work elementwise on arrays.

# %%
xs = np.arange(1, 9)
print(F.vmul(xs, xs), F.vtrace(xs))

# %% [markdown]
# ## Quadratics through Artin-Schreier
#
# In characteristic 2, w^2 + w = c has a solution exactly when Tr(c) = 0,
# and then the two solutions differ by 1.

# %%
for c in range(6):
    print(c, "trace", F.trace(c), "->", F.solve_artin_schreier(c))

# %% [markdown]
# ## Cubics
#
# solve_cubic returns the distinct roots in F_q.  The vectorized version
# pads each row to three entries with -1.

# %%
print(F.solve_cubic(1, 0, 0, 1))  # u^3 = 1: the cube roots of unity exist iff m is even
roots, zero = F.vsolve_cubic([1, 1, 0], [0, 3, 0], [0, 5, 0], [1, 7, 0])
print(roots, zero)

# %% [markdown]
# ## A different model of the same field
#
# Counts never depend on the chosen modulus; only the bit patterns do.

# %%
for mod in irreducibles(8)[:3]:
    G = FieldCtx(8, mod)
    print(bin(mod), "primitive element", G.primitive_element, "table sha256", G.table_checksum()[:16])

# %% [markdown]
# Frobenius orbits on P^2(F_q) are what the cover counter iterates over.

# %%
reps, sizes = FieldCtx(4).galois_orbits_P2()
print(len(reps), "orbits;", sizes.sum(), "points =", 16 ** 2 + 16 + 1)
