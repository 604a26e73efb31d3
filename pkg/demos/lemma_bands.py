"""
Regression bands for the bounds
===============================

Every bound in the registry has an unspecified constant, so the check is
stability: ratios on a fixed grid are frozen once into a band file and later
runs must stay inside. This script runs a slice of the grid and shows where
each lemma sits in its band.
"""

from shifted_primes import registry

bands = registry.read_bands()
reports = registry.run_grid()
print(f"{len(reports)} reports over {len(bands)} lemmas\n")
print(f"{'lemma':>16} {'n':>4} {'min ratio':>10} {'max ratio':>10}   band")
for lid in registry.REGISTRY:
    rs = [r.ratio for r in reports if r.lemma_id == lid]
    b = bands[lid]
    print(f"{lid:>16} {len(rs):>4} {min(rs):>10.4g} {max(rs):>10.4g}   [{b.lo}, {b.hi}]")

bad = registry.check_bands(reports, bands)
print("\noutside band:", len(bad))

# One report in full
r = registry.run_lemma("primecor_pair", x=10**5, z=100, B=2, C=6)
print("\n", r.as_dict())
