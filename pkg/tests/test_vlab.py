import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import vflab.vlab as vlab
from conftest import XY, polynomials
from vflab.bfunction import BFunction
from vflab.parsing import parse_polynomial
from vflab.polynomial import Polynomial, VarSet
from vflab.vlab import (
    CERTIFIED,
    BfElement,
    OutsideWindowError,
    SnapshotNotSaturated,
    Truncation,
    VLab,
    VModel,
    act_derivation,
    act_dt,
    act_s,
    act_t,
    act_x,
    check_axioms,
    elementary_graded_annihilators,
    gr_action_maps,
    is_full_window,
    membership_certify,
    replay_trace,
    tau,
    truncated_subspace,
    v_generators,
)

F = Fraction
S = VarSet(("s",))
CUSP = parse_polynomial("x^2 + y^3")
CUSP_MODEL = VModel.quasi_homogeneous(CUSP, (F(1, 2), F(1, 3)))


def fx(text, vs=XY):
    return parse_polynomial(text, vs)


def sp(text):
    return parse_polynomial(text, S)


elements = st.dictionaries(st.integers(0, 2), polynomials(max_terms=3, max_deg=2), max_size=3)
fs = st.sampled_from(["x^2 + y^3", "x*y", "x^2*y^3", "y"])


class TestActions:
    def test_t_examples(self):
        f = CUSP
        u = fx("x*y")
        assert act_t(BfElement.delta(f)) == BfElement.delta(f, f)
        assert act_t(BfElement.delta(f, j=1)) == BfElement({1: f, 0: -Polynomial.constant(XY, 1)}, f)
        assert act_t(BfElement.delta(f, u, 2)) == BfElement({2: f * u, 1: u * -2}, f)

    def test_derivation_examples(self):
        assert act_derivation("x", BfElement.delta(CUSP)) == BfElement.delta(CUSP, fx("-2*x"), 1)
        f = fx("x^2")
        e = act_derivation("x", BfElement.delta(f, fx("x")))
        assert e == BfElement({0: fx("1"), 1: fx("-2*x^2")}, f)
        assert act_dt(BfElement.delta(f, fx("y"))) == BfElement.delta(f, fx("y"), 1)

    @given(elements, fs)
    def test_commutation_relations(self, comps, ftext):
        f = fx(ftext)
        e = BfElement(comps, f)
        assert act_dt(act_t(e)) - act_t(act_dt(e)) == e
        assert act_derivation("x", act_x("x", e)) - act_x("x", act_derivation("x", e)) == e
        assert act_derivation("x", act_t(e)) == act_t(act_derivation("x", e))
        assert act_derivation("y", act_x("x", e)) == act_x("x", act_derivation("y", e))
        assert act_s(e) == -act_dt(act_t(e))


class TestTau:
    def test_examples(self):
        assert tau(sp("s"), fx("1"), CUSP) == BfElement.delta(CUSP, -CUSP, 1)
        assert tau(sp("1"), fx("1"), CUSP) == BfElement.delta(CUSP)

    @pytest.mark.parametrize("ftext", ["x^2", "x^2 + y^3"])
    @pytest.mark.parametrize("m", range(5))
    def test_falling_factorial(self, ftext, m):
        f = fx(ftext)
        P = Polynomial.constant(S, 1)
        for i in range(m):
            P = P * (sp("s") - i)
        assert tau(P, fx("1"), f) == BfElement.delta(f, f ** m * (-1) ** m, m)

    @settings(max_examples=40)
    @given(polynomials(S, max_terms=3, max_deg=3), polynomials(max_terms=3, max_deg=2), fs)
    def test_intertwines_t(self, P, u, ftext):
        # t acts on P(s) u f^s as P(s+1) u f f^s
        f = fx(ftext)
        shifted = P.substitute("s", sp("s + 1"))
        assert tau(shifted, u * f, f) == act_t(tau(P, u, f))


class TestGenerators:
    def test_snc(self):
        model = VModel.snc((2, 3))
        f = model.f
        gens = v_generators(model, F(1, 3), 1)
        assert gens[0] == BfElement.delta(f)
        gens = v_generators(model, F(5, 6), 1)
        assert BfElement.delta(f, fx("x*y^2")) in gens

    def test_quasi_homogeneous(self):
        assert v_generators(CUSP_MODEL, F(5, 6), 0) == [BfElement.delta(CUSP)]
        gens = v_generators(CUSP_MODEL, F(1), 1)
        assert BfElement.delta(CUSP, fx("y")) in gens and BfElement.delta(CUSP, fx("x")) in gens

    def test_smooth(self):
        model = VModel.smooth()
        assert v_generators(model, 2, 0) == [BfElement.delta(model.f, fx("y"))]

    def test_negative_cap(self):
        with pytest.raises(ValueError):
            v_generators(VModel.snc((1,)), 0, -1)

    def test_grid(self):
        assert VModel.snc((2, 3)).grid_denominator() == 6
        assert CUSP_MODEL.grid_denominator() == 6
        assert VModel.smooth().grid_denominator() == 1
        assert CUSP_MODEL.snap(F(1, 4)) == F(1, 3)
        assert CUSP_MODEL.above(F(1, 3)) == F(1, 2)


class TestSnapshots:
    def test_smooth_full_window(self):
        model = VModel.smooth()
        trunc = Truncation(2, 4)
        assert is_full_window(truncated_subspace(model, 0, trunc))
        assert is_full_window(truncated_subspace(model, 1, trunc))
        assert not is_full_window(truncated_subspace(model, 2, trunc))

    def test_xy_level_one(self):
        model = VModel.snc((1, 1))
        lab = VLab(model, Truncation(2, 6))
        f = model.f
        one = lab.snapshot(1)
        assert one.saturated
        assert one.contains(BfElement.delta(f, fx("x*y")))
        assert one.contains(BfElement.delta(f))  # I(f^1) = (1) for a = (1, 1)
        assert not lab.above(1).contains(BfElement.delta(f))

    def test_large_level_is_zero(self):
        assert truncated_subspace(VModel.snc((1, 1)), 20, Truncation(1, 4)).dim == 0

    def test_replay(self):
        lab = VLab(VModel.snc((2, 3)), Truncation(2, 6), keep_trace=True)
        assert replay_trace(lab.snapshot(F(1, 2)))
        with pytest.raises(ValueError):
            replay_trace(VLab(VModel.snc((2, 3)), Truncation(1, 3)).snapshot(0))

    def test_membership(self):
        snc = VModel.snc((2, 3))
        trunc = Truncation(3, 12)
        assert membership_certify(BfElement.delta(snc.f), snc, F(1, 3), trunc) == CERTIFIED
        assert membership_certify(BfElement.delta(CUSP), CUSP_MODEL, F(5, 6), trunc) == CERTIFIED
        quad = VModel.quasi_homogeneous(fx("x^2 + y^2 + z^2", VarSet(("x", "y", "z"))), (F(1, 2),) * 3)
        assert membership_certify(BfElement.delta(quad.f, j=1), quad, F(1, 2), Truncation(2, 6)) == CERTIFIED
        with pytest.raises(OutsideWindowError):
            membership_certify(BfElement.delta(snc.f, j=9), snc, 0, trunc)


class TestGraded:
    def test_xy_half_is_zero(self):
        g = gr_action_maps(VModel.snc((1, 1)), F(1, 2), Truncation(3, 8))
        assert g.dim_source == 0 and g.t_injective and g.t_surjective

    def test_smooth_half_is_zero(self):
        assert gr_action_maps(VModel.smooth(), F(1, 2), Truncation(2, 5)).dim_source == 0

    def test_snc_third(self):
        g = gr_action_maps(VModel.snc((2, 3)), F(1, 3), Truncation(3, 12))
        assert g.dim_source > 0 and g.t_injective and g.t_surjective and g.dt_injective

    def test_refuses_unsaturated(self):
        with pytest.raises(SnapshotNotSaturated):
            gr_action_maps(VModel.snc((2, 3)), F(1, 3), Truncation(2, 6, max_rounds=1))


class TestAxioms:
    def test_xy_small(self):
        report = check_axioms(VModel.snc((1, 1)), [F(k, 2) for k in range(5)], Truncation(3, 8))
        assert report.ok, report.failures
        # b of xy is (s+1)^2: (s+1) alone does not kill Gr^1
        assert [lv.nilpotency_order for lv in report.levels] == [1, 1, 2, 1, 2]
        blob = report.to_json()
        assert set(blob["levels"][0]) == {"alpha", "dim", "saturated", "containments", "nilpotency_order"}
        assert set(blob["levels"][0]["containments"]) == {"mono", "t_up", "t_eq", "dt_down"}
        json.dumps(blob)

    def test_unsaturated_reported_as_warning(self):
        report = check_axioms(VModel.snc((1, 1)), [F(0), F(1)], Truncation(2, 6, max_rounds=1))
        assert report.warnings and all(not lv.saturated for lv in report.levels)


LEVELS = [F(k, 6) for k in range(7)]


class TestNegativeControls:
    """Deliberately wrong models must be caught by the checker."""

    def test_shifted_quasi_homogeneous_threshold(self, monkeypatch):
        orig = vlab._minimal_monomials_above
        monkeypatch.setattr(vlab, "_minimal_monomials_above", lambda w, th, md: orig(w, th - F(1, 6), md))
        report = check_axioms(CUSP_MODEL, LEVELS, Truncation(3, 12))
        assert not report.ok

    def test_floor_instead_of_ceiling(self, monkeypatch):
        monkeypatch.setattr(vlab, "snc_ideal_exponent",
                            lambda a, lam: tuple(max(int(lam * x), 0) for x in a))
        report = check_axioms(VModel.snc((2, 3)), LEVELS, Truncation(3, 12))
        assert not report.ok

    def test_missing_higher_generators(self, monkeypatch):
        orig = vlab.v_generators
        monkeypatch.setattr(vlab, "v_generators",
                            lambda m, a, j, md=None: [g for g in orig(m, a, j, md) if g.max_order() == 0])
        report = check_axioms(VModel.snc((2, 3)), LEVELS, Truncation(2, 8))
        assert not report.ok
        with pytest.raises(vlab.AxiomViolation):
            report.raise_on_failure()


class TestElementary:
    def test_canonical(self):
        out = elementary_graded_annihilators(sp("s"), 1, 1, 1, 0)
        assert out == [(sp("s"), 1), (sp("s^2"), 1)]

    def test_shifted(self):
        out = elementary_graded_annihilators(sp("s*(s + 1/3)"), 1, 2, 1, 1)
        assert out == [(sp("s + 1"), 2), (sp("(s + 1)*(s + 1)*(s + 4/3)"), 1)]

    def test_dual(self):
        b = sp("s*(s + 1/3)")
        out = elementary_graded_annihilators(b, 1, 2, 1, 0, dual=True)
        assert out == [(sp("s + 1"), 2), (sp("(s + 1)*(-s - 1)*(-s - 1 + 1/3)"), 1)]

    def test_bfunction_input(self):
        out = elementary_graded_annihilators(BFunction.parse("s(s+1/2)"), 1, 1, 1, 0)
        assert out[1] == (sp("s^2*(s + 1/2)"), 1)

    def test_rejections(self):
        with pytest.raises(ValueError):
            elementary_graded_annihilators(sp("s + 1"), 0, 1, 1, 0)
        with pytest.raises(ValueError):
            elementary_graded_annihilators(sp("s^2"), 1, 1, 1, 0)
