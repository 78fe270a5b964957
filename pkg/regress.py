import time
from fractions import Fraction

from parametra.modules import Ring, ModOrder, OpPoly, ModElement, ModMatrix
from parametra.groebner import trinity
from parametra.genericity import genericity_from_trinity
from parametra.polynomials import ParamPoly, ParamFraction


def matrix_is_identity(m: ModMatrix) -> bool:
    cols = m.columns
    if len(cols) != m.rank:
        return False
    seen = set()
    for col in cols:
        if len(col.comps) != 1:
            return False
        (idx, p), = col.comps.items()
        if not (p.is_constant() and p.constant_coeff() == ParamFraction.one(p.constant_coeff().num.nvars)):
            return False
        seen.add(idx)
    return seen == set(range(m.rank))


# --- bipendulum: Q(g,l1,l2)[d], columns (d^2+g/l1, 0), (0, d^2+g/l2), (-g/l1, -g/l2)
ring = Ring(params=("g", "l1", "l2"), opvars=("d",))
P, n = 3, 1


def fr(num, den=None):
    np_ = ParamPoly(P, {k: Fraction(v) for k, v in num.items()})
    if den is None:
        return ParamFraction.from_poly(np_)
    dp_ = ParamPoly(P, {k: Fraction(v) for k, v in den.items()})
    return ParamFraction(np_, dp_)


def op(*terms):
    d = {}
    for exp, coeff in terms:
        d[exp] = coeff
    return OpPoly(n, d)


g_over_l1 = fr({(1, 0, 0): Fraction(1)}, {(0, 1, 0): Fraction(1)})
g_over_l2 = fr({(1, 0, 0): Fraction(1)}, {(0, 0, 1): Fraction(1)})
one = ring.coeff_one()

c1 = ModElement(2, {0: op(((2,), one), ((0,), g_over_l1))})
c2 = ModElement(2, {1: op(((2,), one), ((0,), g_over_l2))})
c3 = ModElement(2, {0: op(((0,), -g_over_l1)), 1: op(((0,), -g_over_l2))})
R = ModMatrix(2, [c1, c2, c3])

t0 = time.perf_counter()
tri = trinity(ring, R, want_syzygies=True)
t1 = time.perf_counter()
assert matrix_is_identity(tri.gb), [str(c) for c in tri.gb.columns]
rep = genericity_from_trinity(ring, tri)
names = sorted(p.text(ring.params) for p in rep.factors)
assert names == ["g", "l1-l2"], names
print(f"bipendulum ok ({t1 - t0:.2f}s): GB=Id2, factors {names}")

# --- friction: Q(g,m1,m2,L1,L2,d1,d2,k1,k2)[d]
fring = Ring(params=("g", "m1", "m2", "L1", "L2", "d1", "d2", "k1", "k2"),
             opvars=("d",))
FP = 9


def fpoly(d):
    return ParamPoly(FP, {k: Fraction(v) for k, v in d.items()})


def ffr(numd, dend=None):
    if dend is None:
        return ParamFraction.from_poly(fpoly(numd))
    return ParamFraction(fpoly(numd), fpoly(dend))


def e(**kw):
    v = [0] * FP
    order = ("g", "m1", "m2", "L1", "L2", "d1", "d2", "k1", "k2")
    for k, val in kw.items():
        v[order.index(k)] = val
    return tuple(v)


fone = fring.coeff_one()
# z'_i = k_i/(m_i L_i) - g ;  d'_i = d_i/(m_i L_i)
z1 = ffr({e(k1=1): 1, e(g=1, m1=1, L1=1): -1}, {e(m1=1, L1=1): 1})
z2 = ffr({e(k2=1): 1, e(g=1, m2=1, L2=1): -1}, {e(m2=1, L2=1): 1})
dp1 = ffr({e(d1=1): 1}, {e(m1=1, L1=1): 1})
dp2 = ffr({e(d2=1): 1}, {e(m2=1, L2=1): 1})
L1c = ffr({e(L1=1): 1})
L2c = ffr({e(L2=1): 1})
m1L1 = ffr({e(m1=1, L1=1): 1})
m2L2 = ffr({e(m2=1, L2=1): 1})


def fop(*terms):
    d = {}
    for exp, coeff in terms:
        d[exp] = coeff
    return OpPoly(1, d)


# rows: (L1 d^2 + d'1 d + z'1, 0, m1 L1 d^2), (0, L2 d^2 + d'2 d + z'2, m2 L2 d^2)
# transposed -> columns in A^2:
fc1 = ModElement(2, {0: fop(((2,), L1c), ((1,), dp1), ((0,), z1))})
fc2 = ModElement(2, {1: fop(((2,), L2c), ((1,), dp2), ((0,), z2))})
fc3 = ModElement(2, {0: fop(((2,), m1L1)), 1: fop(((2,), m2L2))})
FR = ModMatrix(2, [fc1, fc2, fc3])

t0 = time.perf_counter()
ftri = trinity(fring, FR, want_syzygies=True)
t1 = time.perf_counter()
print(f"friction trinity: {t1 - t0:.2f}s")
assert matrix_is_identity(ftri.gb), [str(c) for c in ftri.gb.columns]
frep = genericity_from_trinity(fring, ftri)
fnames = sorted(p.text(fring.params) for p in frep.factors)
print("friction factors:")
for nm in fnames:
    print("  ", nm)
