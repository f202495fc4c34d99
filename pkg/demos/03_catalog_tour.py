"""A tour of the identity catalog and its two verification modes.

Every entry in data/catalog.toml pairs a weighted binomial sum with a
claimed closed form and a parameter grid.  verify() checks the claim
against a brute-force evaluation at every grid point with exact rational
arithmetic; verify_pipeline_agreement() re-derives the closed form with
the summation-by-parts machinery and checks that instead.  The catalog
also carries one deliberately corrupted entry so the harness can prove
it still knows how to fail.
"""

from abelsum import (
    default_catalog_path,
    load_catalog,
    verify,
    verify_pipeline_agreement,
)

catalog = load_catalog(default_catalog_path())
print(f"catalog: {len(catalog)} entries from {default_catalog_path()}")
print()

# ---------------------------------------------------------------------------
# Oracle verification of a few entries
# ---------------------------------------------------------------------------

for entry_id in ("sum-Hk", "cor-2.1", "gkp-653", "calkin-num"):
    spec = catalog[entry_id]
    report = verify(spec)
    status = "pass" if report.passed else "FAIL"
    print(f"{entry_id:12s} {status}  {len(report.points):4d} grid points  "
          f"{report.seconds:6.3f}s   {spec.note}")
print()

# ---------------------------------------------------------------------------
# Pipeline agreement: the closed form is re-derived, not just checked
# ---------------------------------------------------------------------------

spec = catalog["cor-2.1"]
report = verify_pipeline_agreement(spec)
vias = {p.via for p in report.points}
print(f"pipeline agreement on {spec.id}: passed={report.passed}, "
      f"evaluation paths={sorted(vias)}")
print()

# ---------------------------------------------------------------------------
# The negative control: a corrupted right-hand side must fail loudly
# ---------------------------------------------------------------------------

control = next(s for s in catalog.values() if s.negative_control)
report = verify(control)
first = report.first_failure
print(f"negative control {control.id!r}: passed={report.passed}")
print(f"first offending point: n={first.n} params={first.params}")
print(f"  lhs = {first.lhs}")
print(f"  rhs = {first.rhs}")
assert not report.passed
