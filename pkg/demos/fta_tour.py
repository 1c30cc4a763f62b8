"""
Orders in F2 x Z
================

H = <a t^2, t^4>.  The free projection is <a>, the vertical part is 4Z, and
``a`` needs the shift t^2 to enter H.
"""

# %%
from relorders import Ambient, fta_basis, fta_order, fta_spectrum, fta_k_roots, fta_elements_of_order
from relorders.words import parse_element

G = Ambient(2, 1)
H = fta_basis([parse_element("a | (2)", G), parse_element("1 | (4)", G)], G)
print(H.serialize())

# %%
# Orders mix the free and the vertical contributions: t needs four steps,
# a needs two, and anything involving b never returns.
for text in ["a", "1 | (1)", "a | (1)", "b", "a^3 | (2)"]:
    print(f"order of {text:>10}: {fta_order(H, parse_element(text, G))}")
print("spectrum:", sorted(fta_spectrum(H)))

# %%
# Square roots of H: one coset of <a t^2, t^2>.  Splitting it by exact order
# leaves the coset t^2 H for order 2.
print(fta_k_roots(H, 2))
print()
print(fta_elements_of_order(H, 2))

# %%
# Cross-check against brute force on a ball: words of length <= 4 and
# vectors with entries in [-6, 6].
from relorders import Ball, verify_decomposition

print(verify_decomposition(H, 2, Ball(4, 6)))
