"""
Subgroups with a prescribed spectrum
====================================

For a finite set O of naturals containing 0 and 1 and closed under divisors,
the subgroup generated by b^-n a^n b^n (n in O, n > 0) has spectrum O.
"""

# %%
from relorders import build_K_O, spectrum, spectrum_bound

for O in [{0, 1}, {0, 1, 2}, {0, 1, 5}, {0, 1, 2, 4}, {0, 1, 2, 3, 6}]:
    K = build_K_O(O)
    print(f"O={sorted(O)}  rank={K.free_rank}  bound={spectrum_bound(K)}  spectrum={sorted(spectrum(K))}")

# %%
# The bound is the number of vertices on cycles of the automaton; the largest
# order can be much smaller than it.
K = build_K_O({0, 1, 2, 3, 6})
print(K.num_vertices, "vertices,", len(K.restricted_vertices), "on cycles")
