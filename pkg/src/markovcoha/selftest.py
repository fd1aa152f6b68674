"""Self-test: every reference check of the package as a pass/fail ledger."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from . import germ, mutation, pipelines, shuffle
from .dimred import count_polynomial, count_reps, cut_reduce, partition_function, zseries_w0
from .presets import MARKOV, preset
from .qarith import DEFAULT_ORDER, HalfLaurent, QRational, series_of_rational
from .qtorus import TorusElement, bps_from_partition, pleth_exp, pleth_log, recombine, twisted_mul
from .quiver import Potential, box_vectors, markov_stability, slope

DEFAULT_SEED = 20240601

BOX = (1, 1, 1)
NEG_SQRT_Q = HalfLaurent.monomial(1, -1)
CUBE = (1, -3, 3, -1)  # (1 - q)^3


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.key:<12} {self.title} ({self.seconds:.2f}s): {self.detail}"


def _target(num) -> HalfLaurent:
    return series_of_rational(QRational(num, CUBE), DEFAULT_ORDER, prefactor=NEG_SQRT_Q)


def check_bps_low() -> Tuple[bool, str]:
    table = pipelines.bps_table(preset("markov-gen"), BOX)
    bad = [d for d, v in pipelines.MARKOV_LOWER_OMEGAS.items() if table[d] != v]
    shown = ", ".join(f"{d}:{table[d].pretty()}" for d in pipelines.MARKOV_LOWER_OMEGAS)
    return not bad, shown


def check_coeff_calc() -> Tuple[bool, str]:
    qp = preset("markov-gen")
    pre, r = pipelines.exact_coefficient(qp, BOX)
    exact = pre == HalfLaurent.monomial(-3, -1) and r == QRational((4, -4, 1), CUBE, 2)
    series = partition_function_coefficient(qp)
    counted = series.agrees_with(_target((4, -4, 1)))
    # the factorization identity: the BPS table with Omega_(1,1,1) = 2 rebuilds it
    rebuilt = pipelines.recombined_coefficient(2).agrees_with(_target((4, -4, 1)))
    return exact and counted and rebuilt, f"exact={exact} series={counted} recombined={rebuilt}"


def partition_function_coefficient(qp) -> HalfLaurent:
    return pipelines.partition_function_for(qp, BOX)[BOX]


def check_marg_calc() -> Tuple[bool, str]:
    qp = preset("markov-marg")
    cd = pipelines.cut_data(qp)
    P = count_polynomial(cd, BOX)
    poly_ok = P == QRational((0, -2, 3))
    pre, r = pipelines.exact_coefficient(qp, BOX)
    exact = pre == HalfLaurent.monomial(-3, -1) and r == QRational((3, -2), CUBE, 2)
    series = partition_function_coefficient(qp).agrees_with(_target((3, -2)))
    return poly_ok and exact and series, f"count={P.pretty()} exact={exact} series={series}"


def check_dependence() -> Tuple[bool, str]:
    rep = pipelines.dependence(preset("markov-gen"), preset("markov-marg"))
    expected = series_of_rational(QRational((1,), (1, -1)), DEFAULT_ORDER, prefactor=NEG_SQRT_Q)
    diff_ok = rep["coefficient_difference_series"].agrees_with(expected)
    om_gen, om_marg = rep["omega"]
    ok = diff_ok and rep["omega_difference"] == HalfLaurent.one() and om_gen == HalfLaurent({0: 2})
    return ok, f"difference ok={diff_ok}; Omega gen={om_gen.pretty()} marg={om_marg.pretty()}"


def _closed_form_dims(n_max: int):
    r = QRational((1,), CUBE) - QRational((1, 2), (1, -1))
    z = series_of_rational(r, n_max, prefactor=HalfLaurent.monomial(-3, -1))
    return shuffle.implied_dimensions(z)


def check_spherical() -> Tuple[bool, str]:
    n_max = 23
    sph = shuffle.spherical_dimensions(MARKOV, BOX, n_max)
    closed = _closed_form_dims(n_max)
    pinned = all(sph[n] == 0 for n in range(-3, 1)) and (sph[1], sph[3], sph[5]) == (3, 7, 12)
    agree = all(sph[n] == closed.get(n, 0) for n in range(-3, n_max + 1))
    return pinned and agree and not sph.partial, f"dims={sph.as_list(1)[::2][:6]}... closed form agrees={agree}"


def check_main_prop() -> Tuple[bool, str]:
    sph = shuffle.spherical_dimensions(MARKOV, BOX, 9)
    v = shuffle.compare_spherical(partition_function_coefficient(preset("markov-gen")), sph)
    return v.kind == "coha_larger" and v.n == 1 and v.gap == 1, str(v)


def check_ginv() -> Tuple[bool, str]:
    Z, sph, v = pipelines.ginv_comparison()
    target = _target((3, -2))
    return v.kind == "equal" and Z[BOX].agrees_with(target), str(v)


def check_mutability() -> Tuple[bool, str]:
    notes = []
    ok = True
    for name in ("markov-case1", "markov-case2", "markov-case3"):
        qp = preset(name)
        s = mutation.QPState(qp.quiver, qp.potential)
        res = mutation.mutability_search(s, 1)
        at2 = mutation.has_two_cycle(mutation.mutate(s, "2"))[0]
        ok &= res.verdict == "obstructed" and len(res.word) == 1 and at2
        notes.append(f"{name}:{res}")
    for name in ("markov-gen", "markov-marg"):
        qp = preset(name)
        s = mutation.QPState(qp.quiver, qp.potential)
        res = mutation.mutability_search(s, 4)
        shaped = all(mutation.is_markov_shaped(x) and not mutation.has_two_cycle(x)[0] for _, x in res.visited)
        ok &= res.verdict == "clear" and shaped
        if name == "markov-marg":
            ok &= all(mutation.mutate(s, k).germ_type() is germ.GermType.T4 for k in MARKOV.vertices)
        notes.append(f"{name}:{res}")
    return ok, "; ".join(notes)


def random_invertible(rng: random.Random, lo: int = -5, hi: int = 5):
    while True:
        M = [[Fraction(rng.randint(lo, hi)) for _ in range(2)] for _ in range(2)]
        if germ.det2(M) != 0:
            return M


def check_germ(seed: int = DEFAULT_SEED, n_random: int = 10**4, n_transforms: int = 200) -> Tuple[bool, str]:
    rng = random.Random(seed)
    ok = all(germ.classify(t) is ty for ty, t in germ.CANONICAL.items())
    for ty, t in germ.CANONICAL.items():
        for _ in range(n_transforms):
            Ms = [random_invertible(rng) for _ in range(3)]
            if germ.classify(germ.transform(t, *Ms)) is not ty:
                ok = False
                break
    generic = 0
    for _ in range(n_random):
        t = germ.CubicTensor([[[rng.randint(-10, 10) for _ in range(2)] for _ in range(2)] for _ in range(2)])
        generic += germ.classify(t) is germ.GermType.T5
    frac = generic / n_random
    return ok and frac >= 0.99, f"canonical+orbits ok={ok}; generic fraction={frac:.4f}"


def _random_torus(rng: random.Random, box, support=None) -> TorusElement:
    vecs = [d for d in box_vectors(box) if support is None or d in support]
    coeffs = {}
    for d in vecs:
        if rng.random() < 0.7:
            coeffs[d] = HalfLaurent({rng.randint(-3, 3): rng.randint(-3, 3) for _ in range(2)})
    return TorusElement(MARKOV, box, coeffs)


def check_properties(seed: int = DEFAULT_SEED) -> Tuple[bool, str]:
    rng = random.Random(seed)
    zeta = markov_stability()
    fails = []
    box = (1, 1, 1)
    for _ in range(10):
        x, y, z = (_random_torus(rng, box) for _ in range(3))
        if not twisted_mul(twisted_mul(x, y), z).agrees_with(twisted_mul(x, twisted_mul(y, z))):
            fails.append("torus associativity")
            break
    # the largest slope class in the box (2,2,2)
    classes = {}
    for d in box_vectors((2, 2, 2)):
        if any(d):
            classes.setdefault(slope(zeta, d), []).append(d)
    big = max(classes.values(), key=len)
    for _ in range(5):
        x = _random_torus(rng, (2, 2, 2), set(big))
        y = _random_torus(rng, (2, 2, 2), set(big))
        if not twisted_mul(x, y).agrees_with(twisted_mul(y, x)):
            fails.append("slope commutativity")
            break
    f = TorusElement(MARKOV, (2, 2, 2), {d: HalfLaurent({rng.randint(-2, 2): 1}) for d in big})
    if not pleth_log(pleth_exp(f, zeta), zeta).agrees_with(f):
        fails.append("Exp/Log round trip")
    table = pipelines.markov_table(2)
    Z = recombine(MARKOV, table, zeta, box)
    back = bps_from_partition(Z, zeta)
    if any(back[d] != v for d, v in table.items()):
        fails.append("factorize/recombine round trip")
    gens = [shuffle.SymPoly.generator(MARKOV, v, k) for v in MARKOV.vertices for k in range(2)]
    for _ in range(5):
        a, b, c = (rng.choice(gens) for _ in range(3))
        left = shuffle.shuffle_product(MARKOV, shuffle.shuffle_product(MARKOV, a, b), c)
        right = shuffle.shuffle_product(MARKOV, a, shuffle.shuffle_product(MARKOV, b, c))
        if left != right:
            fails.append("shuffle associativity")
            break
    for name in ("markov-gen", "markov-marg"):
        cd = pipelines.cut_data(preset(name))
        for d in box_vectors(box):
            for p in (2, 3):
                if count_reps(cd, d, p) != count_reps(cd.brute_force(), d, p):
                    fails.append(f"fiber count {name} {d} q={p}")
    W0 = Potential()
    counted = partition_function(cut_reduce(MARKOV, W0, ()), box)
    closed = zseries_w0(MARKOV, box)
    if not counted.agrees_with(closed):
        fails.append("W=0 count vs closed form")
    n_max = 9
    w0 = shuffle.coha_w0_dimensions(MARKOV, box, n_max)
    v = shuffle.compare_spherical(closed[box], w0)
    if v.kind != "equal":
        fails.append("W=0 series vs symmetric polynomials")
    return not fails, "all hold" if not fails else "failed: " + ", ".join(fails)


CHECKS: List[Tuple[str, str, Callable[[], Tuple[bool, str]]]] = [
    ("bps_low", "low-degree BPS table", check_bps_low),
    ("coeff_calc", "(1,1,1) coefficient, generic potential", check_coeff_calc),
    ("marg_calc", "(1,1,1) coefficient, marginal potential", check_marg_calc),
    ("dependence", "dependence on the potential", check_dependence),
    ("spherical", "spherical subalgebra dimensions", check_spherical),
    ("main_prop", "CoHA larger than spherical part", check_main_prop),
    ("ginv", "G-invariant identity", check_ginv),
    ("mutability", "infinite mutability search", check_mutability),
    ("germ", "cubic germ classifier", check_germ),
    ("properties", "property suites", check_properties),
]


def run(only: Optional[List[str]] = None) -> List[CheckResult]:
    out = []
    for key, title, fn in CHECKS:
        if only and key not in only:
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(key, title, bool(passed), detail, time.perf_counter() - t0))
    return out
