import random

import pytest
import sympy
from gmpy2 import mpq

from realroadmap.polycore import Poly
from realroadmap.textio import parse_poly

XYZ = ["x", "y", "z"]
SPHERE = "x^2+y^2+z^2-1"
TORUS = "(x^2+y^2+z^2+3)^2-16*(x^2+y^2)"
QUARTIC = "(x^2-1)^2+y^2+z^2-1/4"


def P(text, names=XYZ):
    return parse_poly(text, names)


def to_sympy(f: Poly, syms):
    out = sympy.Integer(0)
    for exps, c in f.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, k in zip(syms, exps):
            term *= s**k
        out += term
    return sympy.expand(out)


def from_sympy(expr, syms) -> Poly:
    p = sympy.Poly(sympy.expand(expr), *syms)
    terms = {}
    for exps, c in p.terms():
        c = sympy.Rational(c)
        terms[tuple(exps)] = mpq(int(c.p), int(c.q))
    return Poly(len(syms), terms)


def random_poly(rng: random.Random, n: int, deg: int = 3, terms: int = 4, coeff: int = 9) -> Poly:
    d = {}
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(n)] += 1
        d[tuple(e)] = mpq(rng.randint(-coeff, coeff), rng.randint(1, 4))
    return Poly(n, d)


@pytest.fixture
def sphere():
    return P(SPHERE)


@pytest.fixture
def torus():
    return P(TORUS)


@pytest.fixture
def quartic():
    return P(QUARTIC)


def distinct_plane_solutions(f: Poly, g: Poly, shears=(3, -7)) -> int:
    """Distinct complex common zeros of two coprime plane curves, by resultants.

    After a shear x -> x + c*y the squarefree degree of res_y counts the
    points when the shear separates them; the max over shears is taken.
    """
    X, Y = sympy.symbols("X Y")
    best = 0
    for c in shears:
        fs = to_sympy(f, (X, Y)).subs(X, X + c * Y)
        gs = to_sympy(g, (X, Y)).subs(X, X + c * Y)
        r = sympy.Poly(sympy.resultant(sympy.expand(fs), sympy.expand(gs), Y), X)
        if r.is_zero:
            raise ValueError("curves share a component")
        best = max(best, sympy.sqf_part(r).degree())
    return best


# ---------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion in the terminal summary

_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and not report.failed):
        return
    number, title = mark.args
    entry = _criteria.setdefault(number, {"titles": [], "failed": [], "ran": 0})
    if title not in entry["titles"]:
        entry["titles"].append(title)
    entry["ran"] += report.when == "call"
    if report.failed:
        entry["failed"].append(title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "FAIL" if entry["failed"] else "PASS"
        detail = "; ".join(entry["titles"])
        if entry["failed"]:
            detail += "  [failed: " + "; ".join(dict.fromkeys(entry["failed"])) + "]"
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}")
