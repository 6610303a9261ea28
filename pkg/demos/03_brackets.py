"""The two differential graded Lie algebras over K[t].

Poly vector fields carry the wedge product and the Schouten-Nijenhuis
bracket; poly differential operators carry the Gerstenhaber bracket and the
shifted Hochschild differential d = [mu, -].  Both brackets are exercised
here on the examples that pin the sign conventions.
"""

from linfty.diffop import PolyDiffOp, gerstenhaber, hochschild_d, mu
from linfty.poly import Poly
from linfty.polyvec import PolyVec, is_poisson, schouten, wedge

print(__doc__)

n = 3
t1, t2, t3 = (Poly.var(i, n) for i in (1, 2, 3))
d1 = PolyVec.basis((1,), n)
d2 = PolyVec.basis((2,), n)

print("[d1, t1^2]        =", schouten(d1, PolyVec.from_function(t1 * t1)).text())
print("[d1, t1*d1]       =", schouten(d1, PolyVec.basis((1,), n, coeff=t1)).text())
print("[d1^d2, t1*t2]    =",
      schouten(wedge(d1, d2), PolyVec.from_function(t1 * t2)).text())

so3 = PolyVec(n, {(1, 2): t3}) + PolyVec(n, {(2, 3): t1}) + PolyVec(n, {(1, 3): -t2})
print("\nthe so(3) linear bivector", so3.text())
print("is Poisson:", is_poisson(so3))

print("\noperator side:")
m = mu(2)
print("[mu, mu] = 0 (associativity):", gerstenhaber(m, m).is_zero())
dd = hochschild_d(PolyDiffOp.basis(((2, 0),), 2))
print("d(second derivative) applied to (t1, t1):",
      dd.apply([Poly.var(1, 2), Poly.var(1, 2)]).text())
print("d(derivation) = 0:",
      hochschild_d(PolyDiffOp.basis(((1, 0),), 2, coeff=Poly.var(2, 2))).is_zero())
phi = PolyDiffOp.basis(((2, 0), (0, 1)), 2, coeff=Poly.var(1, 2))
print("d(d(phi)) = 0:", hochschild_d(hochschild_d(phi)).is_zero())
print("d(phi) == [mu, phi] (independent code paths):",
      hochschild_d(phi) == gerstenhaber(m, phi))
print("order of [phi, phi'] bounded by the sum of orders:",
      gerstenhaber(phi, phi).order(), "<=", 2 * phi.order())
