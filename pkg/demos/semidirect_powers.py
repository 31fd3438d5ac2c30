"""Powers V^e : H of the 3-dimensional F2-module of the Frobenius group of
order 21.  For small e the closed form is compared with the engine; for
e = 3 only the closed form runs and already rules out proficiency."""

from profgrp.catalog import section7_report

for e in (1, 2, 3):
    rep = section7_report("frob:21", e, engine_bound=2000 if e < 3 else 0)
    print(f"e={e}: factors of wedge^2 V have dims {rep.U_dims}, closed-form h2 {rep.closed_h2}, nu2 {rep.nu2}")
    if rep.engine:
        agree = all(row["agree"] for row in rep.engine["rows"])
        print(f"   engine on the group of order {rep.engine['order']} agrees: {agree}")
    print(f"   nu2 lower bound {rep.nu2_lower_bound} vs trivial-module max {rep.nu2_trivial_max}: {rep.verdict}")
