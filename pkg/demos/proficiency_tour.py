"""Certificates for a few small perfect groups and their covers.

The table lists, for every prime dividing the order and every irreducible
module, h0, h1, h2 and nu2.  The group is certified proficient when the
largest nu2 is reached at the trivial module."""

import sys

from profgrp.proficiency import kunneth_certificate, proficiency

specs = sys.argv[1:] or ["alt:5", "sl2:5", "sym:5"]
for spec in specs:
    cert = proficiency(spec)
    print(f"{spec}: {cert.verdict}, max nu2 {cert.max_nu2}, r_hat - d = {cert.rhat_minus_d}")
    for p in cert.primes:
        for row in cert.table[str(p)]:
            print(f"   p={p} {row['module']:>6} dim {row['dim']:>2}  h1={row['h1']} h2={row['h2']} nu2={row['nu2']}")

square = kunneth_certificate("sl2:5", "sl2:5")
print(f"SL(2,5) x SL(2,5): max nu2 {square.max_nu2} over fields {square.fields}")
