"""The antisymmetrization map into differential operators and its desk-scale
cohomology consequences.

``u1`` sends a wedge of vector fields to the alternating multi-derivation
operator (coefficient 1/p!), identity on functions.  Its image is normalized
of order <= 1, it is a chain map out of the zero-differential side, and on
order/degree-filtered slices it induces an isomorphism onto the Hochschild
cohomology of the operator side; ``cohomology_rank`` / ``hkr_report`` verify
the rank-level shadow of that statement by exact Gaussian elimination.

``kontsevich_conditions`` checks a user-supplied sequence of higher
coefficients against the checkable predicates: the fixed first coefficient,
vanishing on wedges of vector fields, vanishing with a linear first slot,
equivariance under unimodular linear substitutions, and the explicit
morphism identity up to a chosen arity.  Nothing beyond the first
coefficient is ever computed here; plugins supply the rest.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .diffop import PolyDiffOp, gerstenhaber, hochschild_d, mu, transform as d_transform
from .linalg import rank, row_reduce
from .linf import identity_sign_data
from .poly import Poly, monomials_up_to, multi_indices_up_to
from .polyvec import PolyVec, schouten, transform as t_transform, wedge
from .scalars import CoeffDGA, DgaElem, frac_str, ksign, rational_field


def u1(alpha: PolyVec) -> PolyDiffOp:
    """Antisymmetrized multi-derivation operator of a poly vector field.

    f d_{i1}^...^d_{ip}  ->  (f/p!) sum_sigma sgn(sigma) d_{i_sigma(1)} x ... x d_{i_sigma(p)}
    and the identity on the degree -1 part.
    """
    n = alpha.n
    out = {}
    for w, f in alpha.terms.items():
        p = len(w)
        if p == 0:
            key = ()
            prev = out.get(key)
            out[key] = f if prev is None else prev + f
            continue
        scale = Fraction(1, math.factorial(p))
        for perm in itertools.permutations(range(p)):
            sgn = _perm_sign(perm)
            word = tuple(_unit_mi(n, w[k]) for k in perm)
            add = f.scale(scale * sgn)
            prev = out.get(word)
            s = add if prev is None else prev + add
            if s:
                out[word] = s
            else:
                out.pop(word, None)
    op = PolyDiffOp(n, out, alpha.alg)
    assert op.is_normalized() and op.order() <= 1
    return op


def _unit_mi(n, i):
    e = [0] * n
    e[i - 1] = 1
    return tuple(e)


def _perm_sign(perm):
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def u1_chain_check(n, samples, seed=0, max_degree=2) -> dict:
    """hochschild_d(u1(alpha)) must vanish exactly on every sample."""
    rng = random.Random(seed)
    failures = []
    for k in range(samples):
        alpha = random_polyvec(n, rng, max_degree=max_degree)
        if not hochschild_d(u1(alpha)).is_zero():
            failures.append(alpha.text())
    return {"samples": samples, "ok": not failures, "failures": failures}


def random_polyvec(n, rng, p=None, max_degree=2, terms=2):
    p = p if p is not None else rng.randint(-1, n - 1)
    words = list(itertools.combinations(range(1, n + 1), p + 1))
    out = PolyVec.zero(n)
    for _ in range(terms):
        w = rng.choice(words)
        f = Poly.zero(n)
        for _ in range(rng.randint(1, 2)):
            e = tuple(rng.randint(0, 1) for _ in range(n))
            if sum(e) > max_degree:
                continue
            f = f + Poly.monomial(e, Fraction(rng.randint(-2, 2)))
        if f:
            out = out + PolyVec(n, {w: f})
    return out


# ---------------------------------------------------------------------------
# filtered slices and exact cohomology ranks
# ---------------------------------------------------------------------------

class TruncationSpec:
    """Finite slice of the operator complex: order and coefficient-degree caps.

    The slice in degree p is spanned by  t^e * D[j_0;...;j_p]  with
    |e| <= max_poly_degree and |j_k| <= max_operator_order; the Hochschild
    differential preserves both caps (checked at runtime, not trusted).
    """

    def __init__(self, n, max_poly_degree, max_operator_order, p_min, p_max):
        if p_min < -1 or p_max < p_min:
            raise ValueError("bad degree window")
        self.n = n
        self.max_poly_degree = max_poly_degree
        self.max_operator_order = max_operator_order
        self.p_min = p_min
        self.p_max = p_max

    def d_slice_basis(self, p):
        if p < -1:
            return []
        monos = monomials_up_to(self.n, self.max_poly_degree)
        mis = multi_indices_up_to(self.n, self.max_operator_order)
        words = [()] if p == -1 else list(itertools.product(mis, repeat=p + 1))
        return [(e, w) for w in words for e in monos]

    def t_slice_basis(self, p):
        monos = monomials_up_to(self.n, self.max_poly_degree)
        words = list(itertools.combinations(range(1, self.n + 1), p + 1))
        return [(e, w) for w in words for e in monos]

    def reliable(self, p):
        lower_ok = (p == -1) or (p - 1 >= self.p_min)
        return lower_ok and (p + 1 <= self.p_max) and (self.p_min <= p <= self.p_max)

    def to_dict(self):
        return {"n": self.n, "max_poly_degree": self.max_poly_degree,
                "max_operator_order": self.max_operator_order,
                "window": [self.p_min, self.p_max]}


def op_coords(op: PolyDiffOp, index, where=""):
    """Coordinates of an operator in a slice basis; error if it leaves it."""
    out = {}
    for w, c in op.terms.items():
        for e, q in c.terms.items():
            r = q.rational_part()
            if len(q.coeffs) > (1 if r else 0):
                raise ValueError("slice coordinates need rational coefficients")
            key = (e, w)
            if key not in index:
                raise ValueError(
                    f"operator leaves the declared slice at {key} {where}")
            out[index[key]] = out.get(index[key], Fraction(0)) + r
    return {k: v for k, v in out.items() if v}


def d_matrix(spec: TruncationSpec, p):
    """Rows = d of each degree-p slice basis element, in slice-(p+1) coordinates.

    The runtime closure check lives in op_coords: if an image term fell
    outside the slice this raises instead of returning a wrong rank.
    """
    src = spec.d_slice_basis(p)
    tgt_index = {key: i for i, key in enumerate(spec.d_slice_basis(p + 1))}
    rows = []
    for e, w in src:
        op = PolyDiffOp(spec.n, {w: Poly.monomial(e)})
        rows.append(op_coords(hochschild_d(op), tgt_index, where=f"(d of degree {p})"))
    return rows


def cohomology_rank(spec: TruncationSpec, p):
    """(kernel rank, image-from-below rank, H^p rank) on the slice.

    Requires the window to contain the neighbors of p; a window that cannot
    support the computation raises an edge-degree error.
    """
    if not spec.reliable(p):
        raise ValueError(
            f"edge degree: H^{p} needs window [{max(-1, p - 1)}, {p + 1}] inside "
            f"[{spec.p_min}, {spec.p_max}]")
    dim_p = len(spec.d_slice_basis(p))
    if dim_p == 0:
        return (0, 0, 0)
    rank_dp = rank(d_matrix(spec, p))
    ker = dim_p - rank_dp
    im = rank(d_matrix(spec, p - 1)) if p - 1 >= -1 else 0
    return (ker, im, ker - im)


def u1_matrix(spec: TruncationSpec, p):
    """Rows = u1 of each T-slice basis element in D-slice coordinates."""
    tgt_index = {key: i for i, key in enumerate(spec.d_slice_basis(p))}
    rows = []
    for e, w in spec.t_slice_basis(p):
        alpha = PolyVec(spec.n, {w: Poly.monomial(e)})
        rows.append(op_coords(u1(alpha), tgt_index, where=f"(u1 at degree {p})"))
    return rows


def hkr_report(spec: TruncationSpec) -> dict:
    """Rank comparison of the T-slice with H^p of the D-slice, per degree.

    Each reliable row also certifies that u1 lands in the kernel of d, is
    injective on the slice, and spans H^p modulo the boundaries (the rank of
    [u1 | boundaries] minus the boundary rank equals both dim T and rank H).
    """
    rows = []
    for p in range(spec.p_min, spec.p_max + 1):
        entry = {"p": p, "dim_T_slice": len(spec.t_slice_basis(p)),
                 "window_reliable": spec.reliable(p)}
        if not spec.reliable(p):
            entry.update({"rank_H": None, "match": None, "edge_degree": True})
            rows.append(entry)
            continue
        ker, im, h = cohomology_rank(spec, p)
        u_rows = u1_matrix(spec, p)
        u_rank = rank(u_rows)
        injective = u_rank == len(u_rows)
        tgt_index = {key: i for i, key in enumerate(spec.d_slice_basis(p + 1))}
        chain_map = all(
            not op_coords(hochschild_d(u1(PolyVec(spec.n, {w: Poly.monomial(e)}))),
                          tgt_index)
            for e, w in spec.t_slice_basis(p))
        boundaries = d_matrix(spec, p - 1) if p - 1 >= -1 else []
        b_rank = rank(boundaries)
        composed_rank = rank(u_rows + boundaries) - b_rank
        entry.update({
            "rank_ker": ker, "rank_im": im, "rank_H": h,
            "match": h == entry["dim_T_slice"],
            "u1_injective": injective,
            "u1_chain_map": chain_map,
            "u1_rank_in_H": composed_rank,
            "u1_spans_H": composed_rank == h,
        })
        rows.append(entry)
    return {"spec": spec.to_dict(), "rows": rows,
            "ok": all(r["match"] and r["u1_injective"] and r["u1_spans_H"]
                      and r["u1_chain_map"] for r in rows if r["window_reliable"])}


# ---------------------------------------------------------------------------
# formality plugin checks
# ---------------------------------------------------------------------------

class FormalityPlugin:
    """A candidate sequence of higher coefficients {U_j}; U_1 is fixed.

    taylor: {j: callable taking a list of j PolyVecs, returning a PolyDiffOp}.
    The j = 1 entry defaults to u1.  This artifact never computes j >= 2
    coefficients itself; they are caller-supplied.
    """

    def __init__(self, taylor=None, name="plugin"):
        self.taylor = dict(taylor or {})
        self.taylor.setdefault(1, lambda args: u1(args[0]))
        self.name = name

    def max_j(self):
        return max(self.taylor)

    def eval(self, args):
        j = len(args)
        fn = self.taylor.get(j)
        if fn is None:
            return None
        return fn(list(args))


def trivial_plugin():
    """The first coefficient alone (provably not an L-infinity morphism)."""
    return FormalityPlugin({}, name="u1-only")


def linear_vector_field(n, a, b, coeff=1):
    """t_a d_b, an element of the matrix Lie algebra inside degree 0."""
    return PolyVec(n, {(b,): Poly.var(a, n).scale(Fraction(coeff))})


def formality_identity_residual(plugin: FormalityPlugin, polyvecs):
    """Explicit morphism-identity residual for T -> D at arity len(polyvecs).

    Zero differential on the source kills the internal-d sum; the remaining
    terms use the Schouten bracket upstairs and the Hochschild differential
    and Gerstenhaber bracket downstairs, with the frozen sign table.
    """
    args = list(polyvecs)
    n = args[0].n
    degs = []
    for a in args:
        ds = a.degrees()
        if len(ds) != 1:
            raise ValueError("identity residual needs homogeneous inputs")
        degs.append(ds[0])
    sdegs = tuple(p - 1 for p in degs)
    signs = identity_sign_data(sdegs)
    i = len(args)
    zero = PolyDiffOp.zero(n)

    def ev(vecs):
        v = plugin.eval(vecs)
        return v if v is not None else zero

    out = hochschild_d(ev(args))
    for B, rest, sign in signs["bracket_target"]:
        vb = ev([args[p] for p in B])
        vc = ev([args[p] for p in rest])
        if vb.is_zero() or vc.is_zero():
            continue
        out = out + gerstenhaber(vb, vc).scale(Fraction(sign))
    for k, l, sign in signs["bracket_source"]:
        br = schouten(args[k], args[l])
        if br.is_zero():
            continue
        rest = [args[p] for p in range(i) if p not in (k, l)]
        out = out - ev([br] + rest).scale(Fraction(sign))
    return out


def kontsevich_conditions(plugin: FormalityPlugin, n=2, samples=20, seed=0,
                          max_arity=2) -> dict:
    """Report on the checkable predicates for a candidate coefficient sequence."""
    rng = random.Random(seed)
    report = {"plugin": plugin.name, "n": n, "conditions": {}}

    # (ii), weak shadow: every coefficient must return an operator of finite
    # order on samples (the full poly-differential-operator statement about
    # the maps themselves is not decidable black-box)
    ii_fail = []
    normalized_obs = {}
    for j in sorted(plugin.taylor):
        for _ in range(max(2, samples // 4)):
            args = [random_polyvec(n, rng) for _ in range(j)]
            val = plugin.eval(args)
            if val is None:
                continue
            if not isinstance(val, PolyDiffOp):
                ii_fail.append((j, [a.text() for a in args]))
                continue
            val.order()
            # Open Question hook: normalization is reported, never asserted
            obs = normalized_obs.setdefault(j, {"normalized": 0, "total": 0})
            obs["total"] += 1
            obs["normalized"] += val.is_normalized()
    report["conditions"]["ii_operator_valued"] = {"ok": not ii_fail,
                                                  "witnesses": ii_fail[:3]}
    report["normalization_observed"] = normalized_obs

    # (iv) the first coefficient is the antisymmetrization map, exactly
    mismatches = []
    for _ in range(samples):
        alpha = random_polyvec(n, rng)
        if plugin.eval([alpha]) != u1(alpha):
            mismatches.append(alpha.text())
    report["conditions"]["iv_first_coefficient"] = {"ok": not mismatches,
                                                    "witnesses": mismatches[:3]}

    # (v) higher coefficients vanish on wedges of vector fields
    v_fail = []
    for j in sorted(k for k in plugin.taylor if k >= 2):
        for _ in range(samples):
            args = [random_polyvec(n, rng, p=0) for _ in range(j)]
            val = plugin.eval(args)
            if val is not None and not val.is_zero():
                v_fail.append((j, [a.text() for a in args]))
    report["conditions"]["v_vector_fields"] = {"ok": not v_fail,
                                               "witnesses": v_fail[:3]}

    # (vi) higher coefficients vanish when the first slot is a linear field
    vi_fail = []
    for j in sorted(k for k in plugin.taylor if k >= 2):
        for _ in range(samples):
            lin = linear_vector_field(n, rng.randint(1, n), rng.randint(1, n))
            args = [lin] + [random_polyvec(n, rng) for _ in range(j - 1)]
            val = plugin.eval(args)
            if val is not None and not val.is_zero():
                vi_fail.append((j, [a.text() for a in args]))
    report["conditions"]["vi_linear_first_slot"] = {"ok": not vi_fail,
                                                    "witnesses": vi_fail[:3]}

    # (iii) equivariance under unimodular integer substitutions
    iii_fail = []
    mats = unimodular_samples(n, rng, 4)
    for M, Minv in mats:
        for j in sorted(plugin.taylor):
            for _ in range(max(1, samples // 4)):
                args = [random_polyvec(n, rng) for _ in range(j)]
                val = plugin.eval(args)
                if val is None:
                    continue
                lhs = plugin.eval([t_transform(a, M, Minv) for a in args])
                rhs = d_transform(val, M, Minv)
                if lhs != rhs:
                    iii_fail.append((j, M))
    report["conditions"]["iii_equivariance"] = {"ok": not iii_fail,
                                                "witnesses": iii_fail[:3]}

    # (i) the morphism identity up to the requested arity; the canonical
    # probe pairs make a defective plugin fail deterministically at arity 2
    i_fail = []
    probes = {2: []}
    if n >= 2 and max_arity >= 2:
        probes[2] = [
            [PolyVec(n, {(1, 2): Poly.var(1, n)}),
             PolyVec(n, {(1, 2): Poly.var(2, n)})],
            [PolyVec(n, {(1, 2): Poly.one(n)}),
             PolyVec.from_function(Poly.var(1, n) * Poly.var(2, n))],
        ]
    for arity in range(1, max_arity + 1):
        cases = [list(p) for p in probes.get(arity, [])]
        for _ in range(samples):
            args = []
            for _ in range(arity):
                p = rng.randint(-1, n - 1)
                a = random_polyvec(n, rng, p=p)
                if a.is_zero():
                    a = PolyVec.basis(tuple(range(1, p + 2)), n)
                args.append(a)
            cases.append(args)
        for args in cases:
            res = formality_identity_residual(plugin, args)
            if not res.is_zero():
                i_fail.append({"arity": arity,
                               "args": [a.text() for a in args],
                               "residual": res.text()})
    report["conditions"]["i_linf_identity"] = {"ok": not i_fail,
                                               "witnesses": i_fail[:3]}
    report["ok"] = all(c["ok"] for c in report["conditions"].values())
    return report


def unimodular_samples(n, rng, count):
    """Integer matrices of determinant ±1 with integer inverses."""
    out = []
    # permutations and signed permutations
    for perm in itertools.permutations(range(n)):
        M = [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)]
        Minv = [[M[j][i] for j in range(n)] for i in range(n)]
        out.append((M, Minv))
    # elementary shears
    for _ in range(count):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.randint(1, 2)
        M = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
        M[i][j] = c
        Minv = [row[:] for row in M]
        Minv[i][j] = -c
        out.append((M, Minv))
    return out[:max(count, 1) + n]


# ---------------------------------------------------------------------------
# the bivector workflow over a coefficient DG algebra
# ---------------------------------------------------------------------------

def tensor_t_d(A: CoeffDGA, elem, d_of=None):
    """Differential of {A-basis index: PolyVec/PolyDiffOp} in the tensor DGLA."""
    out = {}
    for ai, g in elem.items():
        for ai2, q in A.diff.get(ai, {}).items():
            _acc(out, ai2, g.scale(q))
        if d_of is not None:
            _acc(out, ai, d_of(g).scale(ksign(A.degrees[ai])))
    return {k: v for k, v in out.items() if not v.is_zero()}


def tensor_bracket(A: CoeffDGA, e1, e2, bracket, degree_of):
    """[a1 x g1, a2 x g2] = (-1)^{deg a2 deg g1} (a1 a2) x [g1, g2]."""
    out = {}
    for a1, g1 in e1.items():
        for a2, g2 in e2.items():
            br = bracket(g1, g2)
            if br.is_zero():
                continue
            sgn = ksign(A.degrees[a2] * degree_of(g1))
            for ak, q in A.mul_basis(a1, a2).items():
                _acc(out, ak, br.scale(q * sgn))
    return {k: v for k, v in out.items() if not v.is_zero()}


def _acc(store, key, val):
    if val.is_zero():
        return
    prev = store.get(key)
    s = val if prev is None else prev + val
    if s.is_zero():
        store.pop(key, None)
    else:
        store[key] = s


def m_adic_order(A: CoeffDGA, keys):
    """Largest k with every listed A-basis index inside the span of m^k."""
    keys = set(keys)
    if not keys:
        return None
    power = set(range(len(A)))  # m^0 spans everything
    k = 0
    while keys <= power:
        k += 1
        if k == 1:
            power = set(A.ideal)
        else:
            nxt = set()
            for i in power:
                for j in A.ideal:
                    nxt.update(m for m, q in A.mul_basis(i, j).items() if q)
            power = nxt
    return k - 1


def mc_bivector_workflow(pi: PolyVec, A: CoeffDGA, a_elem=None) -> dict:
    """Push a Poisson bivector through the first coefficient over A.

    Forms w = a x pi for a nilpotent d_A-closed homogeneous a (auto-chosen to
    make the total degree 1 when possible), verifies the Maurer-Cartan
    equation on the vector-field side, maps to w' = a x u1(pi), and reports
    the residue d(w') + 1/2 [w', w'] on the operator side together with its
    m-adic order.  The full vanishing of that residue needs the higher
    coefficients and is reported, never asserted.
    """
    from .polyvec import is_poisson
    if not pi.is_zero() and not is_poisson(pi):
        raise ValueError("bivector is not Poisson")
    n = pi.n

    if a_elem is None:
        # prefer degree 0 (making deg w = 1), else degree 1 closed elements
        candidates = sorted(A.ideal, key=lambda i: (A.degrees[i] != 0, i))
        a_idx = None
        for i in candidates:
            if A.degrees[i] in (0, 1) and not A.basis_elem(i).d():
                a_idx = i
                break
        if a_idx is None:
            raise ValueError("no nilpotent closed element of degree 0 or 1 in A")
        a_elem = {a_idx: Fraction(1)}
    else:
        a_elem = {k if isinstance(k, int) else A.index[k]: Fraction(v)
                  for k, v in a_elem.items()}
    a_degs = {A.degrees[i] for i in a_elem}
    if len(a_degs) > 1:
        raise ValueError("a must be homogeneous")
    a_deg = a_degs.pop() if a_degs else 0

    omega = {ai: pi.scale(q) for ai, q in a_elem.items() if q}
    deg_pi = 1

    res_t = tensor_t_d(A, omega)
    br_t = tensor_bracket(A, omega, omega, schouten, lambda g: deg_pi)
    for k, v in br_t.items():
        _acc(res_t, k, v.scale(Fraction(1, 2)))
    res_t = {k: v for k, v in res_t.items() if not v.is_zero()}
    if res_t:
        raise ValueError("w = a x pi does not satisfy the MC equation")

    omega_p = {ai: u1(g) for ai, g in omega.items()}
    omega_p = {k: v for k, v in omega_p.items() if not v.is_zero()}
    res_d = tensor_t_d(A, omega_p, d_of=hochschild_d)
    br_d = tensor_bracket(A, omega_p, omega_p, gerstenhaber, lambda g: deg_pi)
    for k, v in br_d.items():
        _acc(res_d, k, v.scale(Fraction(1, 2)))
    res_d = {k: v for k, v in res_d.items() if not v.is_zero()}

    order = m_adic_order(A, res_d) if res_d else None
    return {
        "a": {A.basis[i]: frac_str(q) for i, q in a_elem.items()},
        "a_degree": a_deg,
        "omega_degree": a_deg + deg_pi,
        "omega_prime": {A.basis[i]: op.text() for i, op in omega_p.items()},
        "residue_zero": not res_d,
        "residue": {A.basis[i]: op.text() for i, op in res_d.items()},
        "residue_m_order": order,
        "residue_m_order_ge_2": (not res_d) or (order is not None and order >= 2),
        "note": "full vanishing requires the higher coefficients; reported only",
    }
