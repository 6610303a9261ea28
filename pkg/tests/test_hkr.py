import itertools
import json
import os
import random
from fractions import Fraction

import pytest

from linfty.diffop import PolyDiffOp, gerstenhaber, hochschild_d, mu
from linfty.hkr import (FormalityPlugin, TruncationSpec, cohomology_rank,
                        d_matrix, formality_identity_residual, hkr_report,
                        kontsevich_conditions, linear_vector_field,
                        m_adic_order, mc_bivector_workflow, op_coords,
                        random_polyvec, trivial_plugin, u1, u1_chain_check,
                        u1_matrix)
from linfty.linalg import nullspace, rank
from linfty.poly import Poly, monomials_up_to
from linfty.polyvec import PolyVec, schouten, wedge
from linfty.scalars import dga_tensor, make_truncated_poly_dga

HERE = os.path.dirname(__file__)


class TestU1:
    def test_identity_on_functions(self):
        f = Poly.var(1, 2) * Poly.var(2, 2)
        assert u1(PolyVec.from_function(f)) == PolyDiffOp.from_function(f)

    def test_two_vector_antisymmetrization(self):
        # golden formula: u1(d1^d2)(c1,c2) = (d1 c1 d2 c2 - d2 c1 d1 c2)/2
        n = 2
        op = u1(PolyVec(n, {(1, 2): Poly.one(n)}))
        rng = random.Random(3)
        for _ in range(20):
            c1 = Poly.monomial(tuple(rng.randint(0, 2) for _ in range(n)),
                               rng.randint(-3, 3))
            c2 = Poly.monomial(tuple(rng.randint(0, 2) for _ in range(n)),
                               rng.randint(-3, 3))
            want = (c1.partial(1) * c2.partial(2) -
                    c1.partial(2) * c2.partial(1)).scale(Fraction(1, 2))
            assert op.apply([c1, c2]) == want

    def test_golden_coefficient_case(self):
        n = 2
        op = u1(PolyVec(n, {(1, 2): Poly.var(1, n)}))
        got = op.apply([Poly.var(1, n), Poly.var(2, n)])
        assert got == Poly.var(1, n).scale(Fraction(1, 2))

    def test_normalized_and_order_one(self):
        rng = random.Random(5)
        for _ in range(40):
            alpha = random_polyvec(rng.choice([2, 3]), rng)
            op = u1(alpha)
            assert op.order() <= 1
            assert op.is_normalized()

    def test_chain_map(self):
        assert u1_chain_check(2, 60, seed=11)["ok"]
        assert u1_chain_check(3, 40, seed=13)["ok"]

    def test_injective_on_slices(self):
        for n in (1, 2):
            spec = TruncationSpec(n, 2, 2, -1, 1)
            for p in (-1, 0):
                rows = u1_matrix(spec, p)
                assert rank(rows) == len(rows)


class TestCohomologyRank:
    def test_degree_minus_one(self):
        # d vanishes out of functions, so H^{-1} is the whole coefficient slice
        spec = TruncationSpec(1, 2, 2, -1, 1)
        ker, im, h = cohomology_rank(spec, -1)
        assert (ker, im, h) == (3, 0, 3)
        assert h == len(spec.t_slice_basis(-1))

    def test_degree_zero_against_cocycle_oracle(self):
        # oracle: solve a phi(b) - phi(ab) + phi(a) b = 0 by brute force
        spec = TruncationSpec(1, 2, 2, -1, 1)
        basis = spec.d_slice_basis(0)
        monos = monomials_up_to(1, 3)
        rows = {}
        for col, (e, w) in enumerate(basis):
            op = PolyDiffOp(1, {w: Poly.monomial(e)})
            for a_e in monos:
                for b_e in monos:
                    a, b = Poly.monomial(a_e), Poly.monomial(b_e)
                    val = a * op.apply([b]) - op.apply([a * b]) + op.apply([a]) * b
                    for ee, c in val.terms.items():
                        key = (a_e, b_e, ee)
                        rows.setdefault(key, {})[col] = c.rational_part()
        kernel = nullspace(list(rows.values()), len(basis))
        ker, im, h = cohomology_rank(spec, 0)
        assert len(kernel) == ker
        assert h == len(spec.t_slice_basis(0))

    def test_zero_slice(self):
        spec = TruncationSpec(1, 0, 0, -1, 3)
        # degree 2 slice in one variable with order cap 0: only multiplication words
        ker, im, h = cohomology_rank(spec, 2)
        assert (ker, im, h)[2] == 0

    def test_edge_degree_error(self):
        spec = TruncationSpec(1, 2, 2, -1, 1)
        with pytest.raises(ValueError, match="edge degree"):
            cohomology_rank(spec, 1)

    def test_closure_check_guards_slices(self):
        # tampering with the slice must raise, not silently produce ranks
        spec = TruncationSpec(1, 2, 2, -1, 1)
        index = {key: i for i, key in enumerate(spec.d_slice_basis(0))}
        op = PolyDiffOp.basis(((3,),), 1)  # outside the order cap
        with pytest.raises(ValueError, match="slice"):
            op_coords(op, index)


class TestHkrReport:
    @pytest.mark.parametrize("n", [1, 2])
    def test_rank_match_window(self, n):
        rep = hkr_report(TruncationSpec(n, 2, 2, -1, 1))
        assert rep["ok"]
        reliable = [r for r in rep["rows"] if r["window_reliable"]]
        assert {r["p"] for r in reliable} == {-1, 0}
        for r in reliable:
            assert r["match"] and r["u1_injective"] and r["u1_spans_H"]
            assert r["u1_chain_map"]

    def test_shrunken_window_flags_edges(self):
        rep = hkr_report(TruncationSpec(1, 2, 2, 0, 0))
        rows = {r["p"]: r for r in rep["rows"]}
        assert rows[0]["window_reliable"] is False
        assert rows[0].get("edge_degree")


class TestKontsevichConditions:
    def test_trivial_plugin_passes_static_conditions(self):
        rep = kontsevich_conditions(trivial_plugin(), n=2, samples=10, seed=7,
                                    max_arity=1)
        conds = rep["conditions"]
        assert conds["iv_first_coefficient"]["ok"]
        assert conds["v_vector_fields"]["ok"]
        assert conds["vi_linear_first_slot"]["ok"]
        assert conds["iii_equivariance"]["ok"]
        assert conds["i_linf_identity"]["ok"]  # arity 1 alone holds (chain map)

    def test_trivial_plugin_fails_arity_two_with_witness(self):
        rep = kontsevich_conditions(trivial_plugin(), n=2, samples=12, seed=7,
                                    max_arity=2)
        cond = rep["conditions"]["i_linf_identity"]
        assert not cond["ok"]
        assert cond["witnesses"] and cond["witnesses"][0]["arity"] == 2
        assert not rep["ok"]

    def test_failure_is_deterministic(self):
        r1 = kontsevich_conditions(trivial_plugin(), n=2, samples=12, seed=7)
        r2 = kontsevich_conditions(trivial_plugin(), n=2, samples=12, seed=7)
        assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)

    def test_corrupted_first_coefficient_fails_iv(self):
        def bad_u1(args):
            return u1(args[0]).scale(2)
        rep = kontsevich_conditions(FormalityPlugin({1: bad_u1}, name="bad"),
                                    n=2, samples=6, seed=9, max_arity=1)
        assert not rep["conditions"]["iv_first_coefficient"]["ok"]

    def test_explicit_witness_of_the_arity_two_defect(self):
        # u1 alone misses the bracket compatibility on coefficient bivectors;
        # the defect is a Hochschild cocycle (what a second coefficient bounds)
        n = 2
        alpha = PolyVec(n, {(1, 2): Poly.var(1, n)})
        beta = PolyVec(n, {(1, 2): Poly.var(2, n)})
        res = formality_identity_residual(trivial_plugin(), [alpha, beta])
        assert not res.is_zero()
        assert hochschild_d(res).is_zero()
        # vector-field pairs do satisfy the identity already at the first level
        xi = PolyVec(n, {(1,): Poly.var(2, n)})
        eta = PolyVec(n, {(2,): Poly.var(1, n) * Poly.var(1, n)})
        assert formality_identity_residual(trivial_plugin(), [xi, eta]).is_zero()

    def test_normalization_reported_for_plugins(self):
        # normalization of plugin outputs is observed and reported, not asserted
        alpha = PolyVec(2, {(1, 2): Poly.one(2)})
        assert u1(alpha).is_normalized()
        rep = kontsevich_conditions(trivial_plugin(), n=2, samples=8, seed=5,
                                    max_arity=1)
        obs = rep["normalization_observed"]
        assert 1 in obs and obs[1]["total"] > 0
        assert rep["conditions"]["ii_operator_valued"]["ok"]


class TestBivectorWorkflow:
    def test_flat_bivector_odd_coefficient(self):
        A = dga_tensor(make_truncated_poly_dga([1], 2, names=["th"]),
                       make_truncated_poly_dga([0], 2))
        pi = PolyVec(2, {(1, 2): Poly.one(2)})
        rep = mc_bivector_workflow(pi, A, a_elem={"th*h": 1})
        assert rep["residue_zero"]
        assert rep["a_degree"] == 1 and rep["omega_degree"] == 2

    def test_zero_bivector(self):
        A = make_truncated_poly_dga([0], 2)
        rep = mc_bivector_workflow(PolyVec.zero(2), A)
        assert rep["omega_prime"] == {} and rep["residue_zero"]

    def test_so3_golden_residue(self):
        # frozen from the apply-level oracle: residue = h^2/2 [u1 pi, u1 pi]
        t1, t2, t3 = (Poly.var(i, 3) for i in (1, 2, 3))
        pi = PolyVec(3, {(1, 2): t3}) + PolyVec(3, {(2, 3): t1}) + \
            PolyVec(3, {(1, 3): -t2})
        A = make_truncated_poly_dga([0], 3)
        rep = mc_bivector_workflow(pi, A)
        with open(os.path.join(HERE, "golden", "so3_workflow_residue.json")) as fh:
            golden = json.load(fh)
        assert rep["a"] == golden["a"]
        assert rep["residue_m_order"] == golden["residue_m_order"] == 2
        assert rep["residue"] == golden["residue"]
        assert not rep["residue_zero"]
        assert rep["residue_m_order_ge_2"]

    def test_so3_residue_matches_bracket_oracle(self):
        # independent path: the residue must equal  h^2/2 x [u1 pi, u1 pi]
        t1, t2, t3 = (Poly.var(i, 3) for i in (1, 2, 3))
        pi = PolyVec(3, {(1, 2): t3}) + PolyVec(3, {(2, 3): t1}) + \
            PolyVec(3, {(1, 3): -t2})
        A = make_truncated_poly_dga([0], 3)
        rep = mc_bivector_workflow(pi, A)
        want = gerstenhaber(u1(pi), u1(pi)).scale(Fraction(1, 2))
        assert rep["residue"] == {"h^2": want.text()}

    def test_non_poisson_rejected(self):
        t3 = Poly.var(3, 3)
        bad = PolyVec(3, {(1, 2): t3 * t3}) + PolyVec(3, {(2, 3): Poly.var(1, 3)})
        if not schouten(bad, bad).is_zero():
            with pytest.raises(ValueError, match="Poisson"):
                mc_bivector_workflow(bad, make_truncated_poly_dga([0], 3))

    def test_m_adic_order(self):
        A = make_truncated_poly_dga([0], 4)
        assert m_adic_order(A, [A.index["h^2"]]) == 2
        assert m_adic_order(A, [A.index["h"], A.index["h^2"]]) == 1
        assert m_adic_order(A, [A.unit_index]) == 0
