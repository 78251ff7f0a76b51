"""AGW-based builders: J subspace, preconditions, PP/APcN outputs."""

import random

import pytest

from cdu import errors
from cdu.cdiff import c_uniformity
from cdu.construct import (
    AgwParams,
    build_agw_pp,
    build_apcn_2to1,
    build_quad_exponent_pp,
    subspace_j,
    validate_preconditions,
)
from cdu.field import make_field, relative_trace
from cdu.funcs import PolyFunc, is_permutation, is_two_to_one, parse_function

F9 = make_field(3, 2)
F25 = make_field(5, 2)
F27 = make_field(3, 3)
F32 = make_field(2, 5)
F64 = make_field(2, 6)


class TestJSubspace:
    def test_f9_is_trace_kernel(self):
        j = subspace_j(F9, 3)
        kernel = tuple(x for x in range(9) if relative_trace(F9, 1, x) == 0)
        assert j.elements == kernel
        assert len(j) == 3

    def test_size_formula(self):
        assert len(subspace_j(F64, 4)) == 16  # q^(n-1), q=4, n=3
        assert len(subspace_j(F27, 3)) == 9
        assert subspace_j(F9, 9).elements == (0,)

    def test_bad_subfield(self):
        with pytest.raises(errors.BadSubfield):
            subspace_j(F27, 9)

    def test_closed_under_addition_and_base_scaling(self):
        for ctx, q0 in [(F9, 3), (F25, 5), (F64, 4)]:
            j = subspace_j(ctx, q0)
            js = j.as_set
            for y in j.elements:
                for z in j.elements:
                    assert ctx.add(y, z) in js
            for lam in ctx.subfield_elements(q0):
                if lam:
                    assert sorted(ctx.mul(lam, y) for y in j.elements) == list(j.elements)

    def test_annihilation_identities(self):
        # x^q - x kills both the relative trace and the power map values
        for ctx, q0, m in [(F9, 3, 1), (F64, 4, 2)]:
            exp = (ctx.order - 1) // (q0 - 1)
            for y in range(ctx.order):
                t = relative_trace(ctx, m, y)
                assert ctx.sub(ctx.pow(t, q0), t) == 0
                v = ctx.pow(y, exp)
                assert ctx.sub(ctx.pow(v, q0), v) == 0


class TestAgwParams:
    def test_requires_exactly_one_of_h_b(self):
        phi = parse_function("x", F9)
        g = parse_function("x", F9)
        with pytest.raises(errors.InvalidParams):
            AgwParams(ctx=F9, q=3, phi=phi, g=g)
        with pytest.raises(errors.InvalidParams):
            AgwParams(ctx=F9, q=3, phi=phi, g=g, h=g, b=1)

    def test_rejects_zero_b(self):
        phi = parse_function("x", F9)
        with pytest.raises(errors.BadB):
            AgwParams(ctx=F9, q=3, phi=phi, g=phi, b=0)

    def test_rejects_non_additive_phi(self):
        with pytest.raises(errors.InvalidParams):
            AgwParams(ctx=F9, q=3, phi=parse_function("x^2", F9),
                      g=parse_function("x", F9), b=1)

    def test_linearity_degree(self):
        # x is linear over the whole field; x^2+x only over F_2
        p1 = AgwParams(ctx=F64, q=4, phi=parse_function("x", F64),
                       g=parse_function("x", F64), b=1)
        assert p1.linearity_degree() == 6
        p2 = AgwParams(ctx=F64, q=4, phi=parse_function("x^2 + x", F64),
                       g=parse_function("x", F64), b=1)
        assert p2.linearity_degree() == 1
        p3 = AgwParams(ctx=F64, q=4, phi=parse_function("x^4 + x", F64),
                       g=parse_function("x", F64), b=1)
        assert p3.linearity_degree() == 2


class TestValidatePreconditions:
    def test_simple_pass(self):
        params = AgwParams(ctx=F9, q=3, phi=parse_function("x", F9),
                           g=parse_function("x^2", F9), b=1)
        rep = validate_preconditions(params)
        assert rep.pp_ok
        assert rep.item("kernel_meets_base_trivially").passed
        assert rep.item("composite_permutes_j").passed

    def test_h_zero_fails_image_check(self):
        params = AgwParams(ctx=F9, q=3, phi=parse_function("x", F9),
                           g=parse_function("x^2", F9), h=PolyFunc(F9, {}))
        rep = validate_preconditions(params)
        assert not rep.item("h_image_in_base_units").passed
        assert not rep.pp_ok

    def test_kernel_detection(self):
        # phi = x^2 + x on F_4-in-F_64 has kernel F_2 (2-to-1, not injective)
        params = AgwParams(ctx=F64, q=4, phi=parse_function("x^2 + x", F64),
                           g=parse_function("x", F64), b=1)
        rep = validate_preconditions(params, two_to_one=True)
        assert not rep.item("kernel_meets_base_trivially").passed
        assert rep.item("phi_two_to_one_on_base").passed
        assert rep.two_to_one_ok

    def test_report_serializes(self):
        params = AgwParams(ctx=F9, q=3, phi=parse_function("x", F9),
                           g=parse_function("x^2", F9), b=1)
        d = validate_preconditions(params).to_dict()
        assert {"items", "pp_ok", "two_to_one_ok", "linearity_degree"} <= set(d)


class TestBuildAgwPP:
    def test_trace_form_example(self):
        params = AgwParams(ctx=F9, q=3, phi=parse_function("x", F9),
                           g=parse_function("x^2", F9), b=1, kind="f1")
        f = build_agw_pp(params)
        assert is_permutation(f)
        # matches the pointwise definition
        for x in range(9):
            psi = F9.sub(F9.pow(x, 3), x)
            expect = F9.add(x, relative_trace(F9, 1, F9.pow(psi, 2)))
            assert f(x) == expect

    def test_zero_g_is_identity(self):
        params = AgwParams(ctx=F9, q=3, phi=parse_function("x", F9),
                           g=PolyFunc(F9, {}), b=1, kind="f1")
        assert str(build_agw_pp(params)) == "x"

    def test_power_form(self):
        params = AgwParams(ctx=F9, q=3, phi=parse_function("x", F9),
                           g=parse_function("x^2 + g*x", F9), b=2, kind="f2")
        f = build_agw_pp(params)
        assert is_permutation(f)
        g = params.g
        exp = (9 - 1) // (3 - 1)
        for x in range(9):
            psi = F9.sub(F9.pow(x, 3), x)
            expect = F9.add(F9.mul(2, x), F9.pow(g(psi), exp))
            assert f(x) == expect
        # every c != 1 in the base field gives a PcN function
        for c in (0, 2):
            assert c_uniformity(f, c) == 1

    def test_precondition_failure_raises(self):
        params = AgwParams(ctx=F32, q=2, phi=parse_function("x^2 + x", F32),
                           g=parse_function("x", F32), b=1)
        with pytest.raises(errors.PreconditionFailed) as exc:
            build_agw_pp(params)
        assert "kernel" in str(exc.value)

    def test_unvalidated_build_still_composes(self):
        params = AgwParams(ctx=F32, q=2, phi=parse_function("x^2 + x", F32),
                           g=parse_function("x", F32), b=1)
        f = build_agw_pp(params, validate=False)
        assert not is_permutation(f)


class TestBuildApcn2to1:
    def test_frobenius_plus_identity_phi_q4_n3(self):
        params = AgwParams(ctx=F64, q=4, phi=parse_function("x^2 + x", F64),
                           g=parse_function("x", F64), b=1, kind="f1")
        f = build_apcn_2to1(params)
        assert is_two_to_one(f)
        for c in F64.subfield_elements(4):
            if c != 1:
                assert c_uniformity(f, c) == 2

    def test_zero_g_gives_phi(self):
        params = AgwParams(ctx=F64, q=4, phi=parse_function("x^2 + x", F64),
                           g=PolyFunc(F64, {}), b=1, kind="f1")
        f = build_apcn_2to1(params)
        assert is_two_to_one(f)
        assert list(f.table) == list(parse_function("x^2 + x", F64).table)

    def test_even_n_impossible(self):
        F16 = make_field(2, 4)
        params = AgwParams(ctx=F16, q=4, phi=parse_function("x^2 + x", F16),
                           g=parse_function("x", F16), b=1)
        with pytest.raises(errors.EvenN):
            build_apcn_2to1(params)

    def test_odd_characteristic_rejected(self):
        params = AgwParams(ctx=F27, q=3, phi=parse_function("x", F27),
                           g=parse_function("x", F27), b=1)
        with pytest.raises(errors.OddCharacteristic):
            build_apcn_2to1(params)

    def test_phi_not_two_to_one(self):
        # phi = x is injective on F_q, not 2-to-1
        params = AgwParams(ctx=F64, q=4, phi=parse_function("x", F64),
                           g=parse_function("x", F64), b=1)
        with pytest.raises(errors.PhiNot2to1):
            build_apcn_2to1(params)

    def test_phi_not_j_permuting(self):
        # phi = x^8 + x on F_64 kills F_8, which meets J nontrivially
        params = AgwParams(ctx=F64, q=4, phi=parse_function("x^8 + x", F64),
                           g=parse_function("x", F64), b=1)
        with pytest.raises(errors.PhiNotJPermuting):
            build_apcn_2to1(params)


class TestBuildQuadExponentPP:
    def test_basic_pp(self):
        j = subspace_j(F25, 5)
        g = PolyFunc(F25, {1: 1, 0: j.elements[1]})
        f = build_quad_exponent_pp(F25, 5, parse_function("x", F25), 1, [(g, 10)])
        assert is_permutation(f)
        for c in (0, 2, 3, 4):
            assert c_uniformity(f, c) == 1

    def test_pp_iff_phi_permutes_j_with_trivial_kernel(self):
        # exhaustive over phi = a0*x + a1*x^5 with base-field coefficients
        j = subspace_j(F25, 5)
        g = PolyFunc(F25, {1: 1, 0: j.elements[1]})
        for a0 in range(5):
            for a1 in range(5):
                if a0 == 0 and a1 == 0:
                    continue
                phi = PolyFunc(F25, {1: a0, 5: a1})
                f = build_quad_exponent_pp(F25, 5, phi, 1, [(g, 10)])
                permutes = sorted(int(phi.table[y]) for y in j.elements) == list(j.elements)
                kernel_trivial = all(int(phi.table[x]) for x in range(1, 5))
                assert is_permutation(f) == (permutes and kernel_trivial)

    def test_multi_term(self):
        j = subspace_j(F25, 5)
        g1 = PolyFunc(F25, {1: 2, 0: j.elements[1]})
        g2 = PolyFunc(F25, {1: 1, 0: j.elements[2]})
        f = build_quad_exponent_pp(F25, 5, parse_function("x", F25), 3,
                                   [(g1, 10), (g2, 10)])
        assert is_permutation(f)

    def test_bad_exponents(self):
        g = PolyFunc(F25, {1: 1})
        with pytest.raises(errors.BadExponent):
            build_quad_exponent_pp(F25, 5, parse_function("x", F25), 1, [(g, 6)])  # 5^0+5^1
        with pytest.raises(errors.BadExponent):
            build_quad_exponent_pp(F25, 5, parse_function("x", F25), 1, [(g, 7)])  # weight 3

    def test_g_not_j_stable(self):
        with pytest.raises(errors.GNotJStable):
            build_quad_exponent_pp(F25, 5, parse_function("x", F25), 1,
                                   [(parse_function("x + 1", F25), 10)])

    def test_bad_b(self):
        g = PolyFunc(F25, {1: 1})
        with pytest.raises(errors.BadB):
            build_quad_exponent_pp(F25, 5, parse_function("x", F25), 0, [(g, 10)])
        with pytest.raises(errors.BadB):
            # an element outside the base subfield
            build_quad_exponent_pp(F25, 5, parse_function("x", F25), 5, [(g, 10)])

    def test_wrong_tower(self):
        with pytest.raises(errors.InvalidParams):
            build_quad_exponent_pp(F27, 3, parse_function("x", F27), 1,
                                   [(PolyFunc(F27, {1: 1}), 12)])

    def test_j_power_lands_in_base(self):
        # y^s lies in F_q for y in J when s has p-weight 2
        j = subspace_j(F25, 5)
        for y in j.elements:
            v = F25.pow(y, 10)
            assert F25.pow(v, 5) == v


class TestModuleInvariantConfigs:
    """Delta checks at the configurations beyond the acceptance list."""

    @pytest.mark.parametrize("q0,n", [(3, 3), (5, 2)])
    def test_trace_power_pcn(self, q0, n):
        ctx = make_field(q0, n)
        rng = random.Random(f"inv{q0}{n}")
        cs = [c for c in range(q0) if c != 1]
        for i in range(6):
            g = PolyFunc(ctx, {rng.randrange(ctx.order): rng.randrange(ctx.order)
                               for _ in range(3)})
            b = rng.randrange(1, q0)
            kind = "f1" if i % 2 == 0 else "f2"
            params = AgwParams(ctx=ctx, q=q0, phi=parse_function("x", ctx),
                               g=g, b=b, kind=kind)
            f = build_agw_pp(params)
            assert is_permutation(f)
            for c in cs:
                assert c_uniformity(f, c) == 1

    def test_quad_exponent_pcn_q3(self):
        ctx = F9
        j = subspace_j(ctx, 3)
        rng = random.Random("inv-quad3")
        for _ in range(6):
            delta = rng.choice(j.elements)
            lam = rng.choice([1, 2])
            g = PolyFunc(ctx, {1: lam, 0: delta})
            b = rng.choice([1, 2])
            f = build_quad_exponent_pp(ctx, 3, parse_function("x", ctx), b,
                                       [(g, 6)])  # 6 = 3^1 + 3^1
            assert is_permutation(f)
            for c in (0, 2):
                assert c_uniformity(f, c) == 1


class TestCppRemark:
    def test_phi_x_gives_cpp_when_b_allows(self):
        rng = random.Random(5)
        for b in (1, 2, 3):  # over F_25: -1 = 4 is excluded, 0 is excluded
            params = AgwParams(ctx=F25, q=5, phi=parse_function("x", F25),
                               g=PolyFunc(F25, {2: rng.randrange(25)}), b=b, kind="f1")
            f = build_agw_pp(params)
            assert is_permutation(f)
            plus_x = PolyFunc.from_table(F25, F25.vadd(f.table, F25.elements()))
            assert is_permutation(plus_x)
