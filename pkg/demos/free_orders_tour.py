"""
Relative orders in a free group
===============================

A walk through one small subgroup of F2: orders of single elements, the set
of all elements of order 2, and the smallest 2-pure overgroup.
"""

# %%
# Build the subgroup H = <a^2, a b^2> from its generators.  The Stallings
# automaton is a folded graph whose closed walks at the basepoint read
# exactly the elements of H.
from relorders import build_stallings, order, spectrum, elements_of_order, pure_closure, to_dot
from relorders.words import parse_word

H = build_stallings([parse_word("a^2"), parse_word("a b^2")], 2)
print(to_dot(H.automaton, "H"))

# %%
# ``a`` squares into H, ``b`` never lands in H, and every order lies in the
# spectrum.
for text in ["a", "b", "a b^2", "b a b^-1"]:
    print(f"order of {text:>9}: {order(H, parse_word(text))}")
print("spectrum:", sorted(spectrum(H)))

# %%
# All elements of order exactly 2 form finitely many cosets, up to
# conjugation by H.  Here there is one: <a^2> a, i.e. the odd powers of a.
print(elements_of_order(H, 2))

# %%
# Adding square roots until none are left: one round gives <a, b^2>, the
# next one the whole group.
trace = []
closure = pure_closure(H, {2}, trace=trace)
for i, step in enumerate(trace, 1):
    print(f"round {i}:", ", ".join(str(w) for w in step.basis))
