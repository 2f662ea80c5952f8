"""Smoke test for the pyladderkit extension module."""

import pyladderkit as lk

q = lk.parse("q")
assert q.is_hermitian()
assert (q * q - q ** 2).is_zero()

a = lk.Operator.annihilation()
ad = lk.Operator.creation()
assert (a.commutator(ad) - lk.Operator("1")).is_zero()
assert ad == a.dagger()

ex = lk.Expansion("q", 2)
alphas = ex.alphas()
assert len(alphas) == 3
assert str(alphas[2].natural()) == "(-1/2) a", str(alphas[2].natural())
assert ex.energies()[1] == "0"
assert abs(ex.energy(0, 0.1) - (0.5 - 0.005)) < 1e-12

quartic = lk.Expansion("p^4", 1)
assert abs(quartic.energy(0, 0.01) - 0.5075) < 1e-12

report = lk.Expansion("p^4", 2).report(["q"], natural=True)
assert report["order"] == 2
assert all(not p["coeffs"] for p in report["expectations"]["q"]["normalized"])

tex = ex.latex()
assert tex.startswith("\\documentclass{article}")
assert tex.count("{") == tex.count("}")

m = q.matrix(6)
assert abs(m[0][1] - 2 ** -0.5) < 1e-12

r = lk.verify("q", order=2, cutoff=64)
assert r["pass"], [c for c in r["checks"] if not c["pass"]]

try:
    lk.Expansion("q + i*p", 1)
except ValueError:
    pass
else:
    raise AssertionError("non-Hermitian perturbation accepted")

try:
    lk.parse("q +* p")
except ValueError:
    pass
else:
    raise AssertionError("parse error not raised")

print("pyladderkit smoke test OK")
