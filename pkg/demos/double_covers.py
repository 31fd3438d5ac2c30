"""Enumerate the double covers of A4, A5 and A6 from their presentations and
look at the centre and the central quotient."""

from profgrp.catalog import build, carmichael_presentation, central_quotient_satisfies

for n in (2, 3, 4):
    cg = build(f"2alt:{n + 2}")
    G = cg.group
    Z = G.center()
    print(f"2A{n + 2}: order {G.order()} acting on {G.degree} cosets, centre of order {len(Z)}")
    ok = central_quotient_satisfies(G, carmichael_presentation(n))
    print(f"  quotient by the centre satisfies the A{n + 2} relators: {ok}")

cg = build("rel43")
print(f"three-generator presentation: order {cg.order()}, perfect {cg.group.is_perfect()}, "
      f"centre {len(cg.group.center())}")
