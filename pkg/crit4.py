import time
from fractions import Fraction

from parametra.modules import Ring, OpPoly, ModElement, ModMatrix
from parametra.groebner import trinity
from parametra.genericity import genericity_from_trinity
from parametra.homology import control_analysis, autonomy_analysis
from parametra.polynomials import ParamPoly, ParamFraction
from parametra.stratify import fact_gb, live_strata, stratify_obstructions
from parametra.modops import module_quotient_by_element, ideal_intersection
from parametra.orders import parse_order_token

NAMES = ("g", "m1", "m2", "L1", "L2", "d1", "d2", "k1", "k2")
FP = len(NAMES)


def e(**kw):
    v = [0] * FP
    for k, val in kw.items():
        v[NAMES.index(k)] = val
    return tuple(v)


def fpoly(d):
    return ParamPoly(FP, {k: Fraction(v) for k, v in d.items()})


def ffr(numd, dend=None):
    if dend is None:
        return ParamFraction.from_poly(fpoly(numd))
    return ParamFraction(fpoly(numd), fpoly(dend))


def fop(*ts):
    return OpPoly(1, dict(ts))


def stage(label, t0):
    t1 = time.perf_counter()
    print(f"  [{t1 - t0:6.2f}s] {label}")
    return t1


T0 = time.perf_counter()
t = T0

# ---- stage 1: generic trinity + genericity -------------------------------------
fring = Ring(params=NAMES, opvars=("d",))
one9 = ParamFraction.one(FP)
z1 = ffr({e(k1=1): 1, e(g=1, m1=1, L1=1): -1}, {e(m1=1, L1=1): 1})
z2 = ffr({e(k2=1): 1, e(g=1, m2=1, L2=1): -1}, {e(m2=1, L2=1): 1})
dp1 = ffr({e(d1=1): 1}, {e(m1=1, L1=1): 1})
dp2 = ffr({e(d2=1): 1}, {e(m2=1, L2=1): 1})
L1c = ffr({e(L1=1): 1})
L2c = ffr({e(L2=1): 1})
m1L1 = ffr({e(m1=1, L1=1): 1})
m2L2 = ffr({e(m2=1, L2=1): 1})

fc1 = ModElement(2, {0: fop(((2,), L1c), ((1,), dp1), ((0,), z1))})
fc2 = ModElement(2, {1: fop(((2,), L2c), ((1,), dp2), ((0,), z2))})
fc3 = ModElement(2, {0: fop(((2,), m1L1)), 1: fop(((2,), m2L2))})
FR = ModMatrix(2, [fc1, fc2, fc3])

ftri = trinity(fring, FR, want_syzygies=True)
rep = genericity_from_trinity(fring, ftri)
t = stage("generic trinity + genericity", t)

# expected P (the 19-term collected polynomial)
P_expected = fpoly({
    e(k1=2, L2=4, m2=2): 1,
    e(k1=1, k2=1, L1=2, L2=2, m1=1, m2=1): -2,
    e(k1=1, d1=1, d2=1, L2=2, m2=1): -1,
    e(k1=1, d2=2, L1=2, m1=1): 1,
    e(k1=1, g=1, L1=2, L2=3, m1=1, m2=2): 2,
    e(k1=1, g=1, L1=1, L2=4, m1=1, m2=2): -2,
    e(k2=2, L1=4, m1=2): 1,
    e(k2=1, d1=2, L2=2, m2=1): 1,
    e(k2=1, d1=1, d2=1, L1=2, m1=1): -1,
    e(k2=1, g=1, L1=4, L2=1, m1=2, m2=1): -2,
    e(k2=1, g=1, L1=3, L2=2, m1=2, m2=1): 2,
    e(d1=2, g=1, L2=3, m2=2): -1,
    e(d1=1, d2=1, g=1, L1=2, L2=1, m1=1, m2=1): 1,
    e(d1=1, d2=1, g=1, L1=1, L2=2, m1=1, m2=1): 1,
    e(d2=2, g=1, L1=3, m1=2): -1,
    e(g=2, L1=4, L2=2, m1=2, m2=2): 1,
    e(g=2, L1=3, L2=3, m1=2, m2=2): -2,
    e(g=2, L1=2, L2=4, m1=2, m2=2): 1,
}).monic()

# sum-of-products form: P = (L2 z'1 - L1 z'2)^2 + (L2 d'1 - L1 d'2)(d'1 z'2 - d'2 z'1)
L1f, L2f = L1c, L2c
sum_form = (L2f * z1 - L1f * z2) ** 2 + (L2f * dp1 - L1f * dp2) * (dp1 * z2 - dp2 * z1)
# clear to the 19-term polynomial: multiply by (m1 L1 m2 L2)^2
clear = ffr({e(m1=2, L1=2, m2=2, L2=2): 1})
cleared = sum_form * clear
assert cleared.den.is_constant(), cleared.den.text(NAMES)
assert cleared.num.monic() == P_expected, "sum-of-products form mismatch"

z1m = fpoly({e(g=1, m1=1, L1=1): 1, e(k1=1): -1}).monic()
z2m = fpoly({e(g=1, m2=1, L2=1): 1, e(k2=1): -1}).monic()
admiss = rep.admissible(frozenset(range(FP)))
assert sorted(p.text(NAMES) for p in admiss) == sorted(
    p.text(NAMES) for p in (z1m, z2m, P_expected)
), [p.text(NAMES) for p in admiss]
t = stage("genericity factors = {z1, z2, P} after admissibility", t)

# ---- stage 2: stratification into the paper's six cases -------------------------
strata = stratify_obstructions(NAMES, admiss)
assert len(strata) == 8, len(strata)  # generic + (2^3 - 1)
live = live_strata(strata)
nongeneric = [s for s in live if s.status != "generic"]
assert len(nongeneric) == 6, [s.describe(NAMES) for s in strata]
empty = [s for s in strata if s.status == "empty"]
assert len(empty) == 1
texts = {p.text(NAMES) for p in empty[0].zero}
assert texts == {z1m.text(NAMES), z2m.text(NAMES)}, texts
assert empty[0].certificate is not None
t = stage("stratification: 6 live cases, {z1=0,z2=0,P<>0} pruned", t)

# ---- stage 3: case 1 (z1 = z2 = 0) ----------------------------------------------
m1L12 = ffr({e(m1=1, L1=2): 1})
m2L22 = ffr({e(m2=1, L2=2): 1})
d1c = ffr({e(d1=1): 1})
d2c = ffr({e(d2=1): 1})

c1 = ModElement(2, {0: fop(((2,), m1L12), ((1,), d1c))})
c2 = ModElement(2, {1: fop(((2,), m2L22), ((1,), d2c))})
c3 = ModElement(2, {0: fop(((2,), m1L1)), 1: fop(((2,), m2L2))})
R1 = ModMatrix(2, [c1, c2, c3])

rep1 = control_analysis(fring, R1)
assert rep1.verdict == "not controllable", rep1.verdict
ann1 = rep1.annihilator
assert len(ann1) == 1 and ann1[0].text(fring) == "d", [
    a.text(fring) for a in ann1
]
rep1a = autonomy_analysis(fring, R1)
assert rep1a.verdict == "not autonomous", rep1a.verdict
t = stage("case 1: not controllable, not autonomous, annihilator <d>", t)

# ---- stage 4: case 2 fact_gb over the elimination ring ---------------------------
T2_OPS = ("k1", "k2", "m1", "m2", "L1", "L2", "d1", "d2")
T2 = Ring(
    params=("g",),
    opvars=T2_OPS,
    order=parse_order_token("(a(1,1),dp)", len(T2_OPS)),
    name="T2",
)



def OM(p: OpPoly, ring) -> OpPoly:
    """Monic rescale of an operator polynomial under the ring's term order."""
    return p.scaled(p.leading_coefficient(ring.order.mono).inverse())

def to_T2(p: ParamPoly) -> OpPoly:
    terms: dict = {}
    for exp, c in p.terms.items():
        oexp = tuple(exp[NAMES.index(nm)] for nm in T2_OPS)
        pexp = (exp[0],)
        coeff = terms.setdefault(oexp, {})
        coeff[pexp] = coeff.get(pexp, Fraction(0)) + c
    return OpPoly(
        len(T2_OPS),
        {
            oe: ParamFraction.from_poly(ParamPoly(1, pterms))
            for oe, pterms in terms.items()
        },
    )


comps = fact_gb(T2, [to_T2(P_expected), to_T2(z1m)], nonzero=[to_T2(z2m)])
assert len(comps) == 1, [[q.text(T2) for q in c] for c in comps]
E_expected = fpoly({
    e(k2=1, m1=2, L1=4): 1,
    e(g=1, m1=2, m2=1, L1=4, L2=1): -1,
    e(m2=1, L2=2, d1=2): 1,
    e(m1=1, L1=2, d1=1, d2=1): -1,
})
got = sorted(OM(q, T2).text(T2) for q in comps[0])
want = sorted(OM(q, T2).text(T2) for q in (to_T2(z1m), to_T2(E_expected)))
assert got == want, (got, want)
t = stage("case 2: fact_gb single component {z1, m1^2*L1^4*z2 + ...}", t)

# ---- stage 5: case 2 annihilator under the solved substitution -------------------
# substitute k1 = g m1 L1 and z2 = (m1 L1^2 d2 - m2 L2^2 d1) d1 / (m1^2 L1^4)
z2s = ffr(
    {e(m1=1, L1=2, d2=1, d1=1): 1, e(m2=1, L2=2, d1=2): -1},
    {e(m1=2, L1=4): 1},
)
c1 = ModElement(2, {0: fop(((2,), m1L12), ((1,), d1c))})
c2 = ModElement(2, {1: fop(((2,), m2L22), ((1,), d2c), ((0,), z2s))})
c3 = ModElement(2, {0: fop(((2,), m1L1)), 1: fop(((2,), m2L2))})
R2 = ModMatrix(2, [c1, c2, c3])
rep2 = control_analysis(fring, R2)
assert rep2.verdict == "not controllable", rep2.verdict
ann2 = rep2.annihilator
# expected <m1 L1^2 d^2 + d1 d>, compare monic forms
exp2 = OM(fop(((2,), m1L12), ((1,), d1c)), fring)
assert len(ann2) == 1 and OM(ann2[0], fring) == exp2, [
    a.text(fring) for a in ann2
]
rep2a = autonomy_analysis(fring, R2)
assert rep2a.verdict == "not autonomous", rep2a.verdict
t = stage("case 2: annihilator <m1*L1^2*d^2 + d1*d>", t)

# ---- stage 6: case 3 (fake parameter u) ------------------------------------------
UNAMES = NAMES + ("u",)
UP = len(UNAMES)
uring = Ring(params=UNAMES, opvars=("d",), name="r3")


def ue(**kw):
    v = [0] * UP
    for k, val in kw.items():
        v[UNAMES.index(k)] = val
    return tuple(v)


def upoly(d):
    return ParamPoly(UP, {k: Fraction(v) for k, v in d.items()})


def uf(numd, dend=None):
    if dend is None:
        return ParamFraction.from_poly(upoly(numd))
    return ParamFraction(upoly(numd), upoly(dend))


uc1 = ModElement(2, {0: fop(((2,), uf({ue(m1=1, L1=2): 1})), ((1,), uf({ue(d1=1): 1})))})
uc2 = ModElement(
    2,
    {1: fop(((2,), uf({ue(m2=1, L2=2): 1})), ((1,), uf({ue(d2=1): 1})), ((0,), uf({ue(u=1): 1})))},
)
uc3 = ModElement(
    2, {0: fop(((2,), uf({ue(m1=1, L1=1): 1}))), 1: fop(((2,), uf({ue(m2=1, L2=1): 1})))}
)
RU = ModMatrix(2, [uc1, uc2, uc3])
utri = trinity(uring, RU, want_syzygies=True)
urep = genericity_from_trinity(uring, utri)
singles = sorted(p.text(UNAMES) for p in urep.parameter_factors())
polys = [p.text(UNAMES) for p in urep.polynomial_factors()]
ubig = upoly({
    ue(m1=2, L1=4, u=1): 1,
    ue(m1=1, L1=2, d1=1, d2=1): -1,
    ue(m2=1, L2=2, d1=2): 1,
}).monic()
print("    case3 singles:", singles)
print("    case3 polys:", polys)
assert set(singles) == {"u", "m2", "L2", "d1"}, singles
assert polys == [ubig.text(UNAMES)], (polys, ubig.text(UNAMES))
urep3 = control_analysis(uring, RU)
assert urep3.verdict == "not controllable"
assert len(urep3.annihilator) == 1 and urep3.annihilator[0].text(uring) == "d"
t = stage("case 3: genericity {u,m2,L2,d1, m1^2*L1^4*u-...}, annihilator <d>", t)

# ---- stage 7: case 6 (common ratio t) --------------------------------------------
R6NAMES = ("g", "t", "m1", "L1", "L2", "d1", "k1")
R6P = len(R6NAMES)
r6 = Ring(params=R6NAMES, opvars=("d",), name="r6")


def re6(**kw):
    v = [0] * R6P
    for k, val in kw.items():
        v[R6NAMES.index(k)] = val
    return tuple(v)


def rf6(numd, dend=None):
    pp = ParamPoly(R6P, {k: Fraction(v) for k, v in numd.items()})
    if dend is None:
        return ParamFraction.from_poly(pp)
    return ParamFraction(pp, ParamPoly(R6P, {k: Fraction(v) for k, v in dend.items()}))


z1_6 = rf6({re6(k1=1): 1, re6(g=1, m1=1, L1=1): -1})
a6 = fop(((2,), rf6({re6(m1=1, L1=2): 1})), ((1,), rf6({re6(d1=1): 1})), ((0,), z1_6))
rc1 = ModElement(2, {0: a6})
rc2 = ModElement(2, {1: a6})
rc3 = ModElement(2, {0: fop(((2,), rf6({re6(L2=1): 1}))), 1: fop(((2,), rf6({re6(t=1, L1=1): 1})))})
R6 = ModMatrix(2, [rc1, rc2, rc3])
rep6 = control_analysis(r6, R6)
assert rep6.verdict == "not controllable", rep6.verdict
exp6 = OM(a6, r6)
assert len(rep6.annihilator) == 1 and OM(rep6.annihilator[0], r6) == exp6, [
    a.text(r6) for a in rep6.annihilator
]
rep6a = autonomy_analysis(r6, R6)
assert rep6a.verdict == "not autonomous", rep6a.verdict
t = stage("case 6: annihilator <m1*L1^2*d^2 + d1*d + k1 - m1*L1*g>", t)

# ---- stage 8: radical adjunction s^2 = d2^2 - 4 m2 L2^2 z2 -----------------------
# Emulate the quotient ring K(params)[d, s]/(s^2 - S): s joins the operator
# variables and the relation columns (s^2 - S) e_i join the presentation.  The
# torsion annihilator is the colon ideal (im : A^2), reported modulo the
# relation.  Composite parameter products are grouped as fresh parameters
# (A_i = m_i L_i^2, B_i = m_i L_i), the same preprocessing the printed case-6
# session applies with its parameter t; the asserted generators are mapped
# back to the original parameters afterwards.
QN = ("A1", "A2", "B1", "B2", "d2", "z1", "z2")
QP = len(QN)
qring = Ring(params=QN, opvars=("d", "s"), name="rq")


def qe(**kw):
    v = [0] * QP
    for k, val in kw.items():
        v[QN.index(k)] = val
    return tuple(v)


def qpoly(d):
    return ParamPoly(QP, {k: Fraction(v) for k, v in d.items()})


def qf(d):
    return ParamFraction.from_poly(d if isinstance(d, ParamPoly) else qpoly(d))


def ideal_member(ring, p, gens):
    M = ModMatrix(1, [ModElement(1, {0: g}) for g in gens])
    return trinity(ring, M).contains(ModElement(1, {0: p}))


qone = ParamFraction.one(QP)
Srel = qpoly({qe(d2=2): 1, qe(A2=1, z2=1): -4})
rel = OpPoly(2, {(0, 2): qone, (0, 0): -qf(Srel)})
seen = []
for sign, tag in ((1, "+"), (-1, "-")):
    # first column scaled by the unit 2 A2 z2 so no input fractions remain
    e1 = OpPoly(2, {
        (2, 0): qf({qe(A1=1, A2=1, z2=1): 2}),
        (1, 0): qf({qe(d2=1, A2=1, z1=1): 1, qe(d2=1, A1=1, z2=1): 1}),
        (1, 1): qf({qe(A2=1, z1=1): Fraction(sign), qe(A1=1, z2=1): Fraction(-sign)}),
        (0, 0): qf({qe(A2=1, z1=1, z2=1): 2}),
    })
    sc1 = ModElement(2, {0: e1})
    sc2 = ModElement(2, {1: OpPoly(2, {(2, 0): qf({qe(A2=1): 1}),
                                       (1, 0): qf({qe(d2=1): 1}),
                                       (0, 0): qf({qe(z2=1): 1})})})
    sc3 = ModElement(2, {0: OpPoly(2, {(2, 0): qf({qe(B1=1): 1})}),
                         1: OpPoly(2, {(2, 0): qf({qe(B2=1): 1})})})
    RS = ModMatrix(2, [sc1, sc2, sc3,
                       ModElement(2, {0: rel}), ModElement(2, {1: rel})])
    q1 = module_quotient_by_element(qring, RS, ModElement(2, {0: OpPoly.one(2, QP)}))
    q2 = module_quotient_by_element(qring, RS, ModElement(2, {1: OpPoly.one(2, QP)}))
    ann = ideal_intersection(qring, [q1, q2])
    for sigma in (1, -1):
        q = OpPoly(2, {(1, 0): qf({qe(A2=1): 2}), (0, 0): qf({qe(d2=1): 1}),
                       (0, 1): qf({qe(): Fraction(sigma)})})
        fwd = all(ideal_member(qring, g, [rel, q]) for g in ann)
        bwd = all(ideal_member(qring, p, ann) for p in (rel, q))
        if fwd and bwd:
            seen.append(sigma)
            break
    else:
        raise AssertionError(
            f"root {tag}: annihilator mismatch: " + str([a.text(qring) for a in ann])
        )
    # back-substitute A2 -> m2 L2^2 and compare against the original-variable
    # generator 2 m2 L2^2 d + d2 + sigma s verbatim (monic in d on both sides)
    BNAMES = NAMES + ("s",)
    BP = len(BNAMES)

    def bpoly(dd):
        return ParamPoly(BP, {k: Fraction(v) for k, v in dd.items()})

    def be(**kw):
        v = [0] * BP
        for k, val in kw.items():
            v[BNAMES.index(k)] = val
        return tuple(v)

    images = {
        "A1": bpoly({be(m1=1, L1=2): 1}), "A2": bpoly({be(m2=1, L2=2): 1}),
        "B1": bpoly({be(m1=1, L1=1): 1}), "B2": bpoly({be(m2=1, L2=1): 1}),
        "d2": bpoly({be(d2=1): 1}),
        "z1": bpoly({be(k1=1): 1, be(g=1, m1=1, L1=1): -1}),
        "z2": bpoly({be(k2=1): 1, be(g=1, m2=1, L2=1): -1}),
    }
    frac_images = [ParamFraction.from_poly(images[nm]) for nm in QN]
    back = {
        exp: coeff.substitute(frac_images)
        for exp, coeff in OpPoly(2, {(1, 0): qf({qe(A2=1): 2}),
                                     (0, 0): qf({qe(d2=1): 1}),
                                     (0, 1): qf({qe(): Fraction(seen[-1])})}).terms.items()
    }
    expect = {
        (1, 0): ParamFraction.from_poly(bpoly({be(m2=1, L2=2): 2})),
        (0, 0): ParamFraction.from_poly(bpoly({be(d2=1): 1})),
        (0, 1): ParamFraction.from_poly(bpoly({be(): seen[-1]})),
    }
    assert back == expect, (back, expect)
assert set(seen) == {1, -1}, seen
t = stage("radical adjunction: annihilators <2 m2 L2^2 d + d2 +/- s>", t)

print(f"criterion 4 total: {time.perf_counter() - T0:.2f}s")
