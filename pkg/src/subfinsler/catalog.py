"""The four-dimensional real Lie algebras of the classification table.

Each family is built from its nonzero commutators with exact rational
coefficients, so Jacobi residuals of catalog entries are exactly zero.  Float
parameters are converted through their shortest decimal representation
(``0.3 -> 3/10``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .lie_core import StructureConstants

FAMILY_NAMES = (
    "4g1", "g21+2g1", "2g21", "g31+g1", "g32+g1", "g33+g1", "g34a+g1", "g35a+g1",
    "g36+g1", "g37+g1", "g41", "g42a", "g43", "g44", "g45ab", "g46ab", "g47",
    "g48a", "g49a", "g410",
)

N_PARAMS = {"g34a+g1": 1, "g35a+g1": 1, "g42a": 1, "g45ab": 2, "g46ab": 2,
            "g48a": 1, "g49a": 1}

PRETTY = {
    "4g1": "4g_1", "g21+2g1": "g_{2,1}+2g_1", "2g21": "2g_{2,1}", "g31+g1": "g_{3,1}+g_1",
    "g32+g1": "g_{3,2}+g_1", "g33+g1": "g_{3,3}+g_1", "g34a+g1": "g_{3,4}^a+g_1",
    "g35a+g1": "g_{3,5}^a+g_1", "g36+g1": "g_{3,6}+g_1", "g37+g1": "g_{3,7}+g_1",
    "g41": "g_{4,1}", "g42a": "g_{4,2}^a", "g43": "g_{4,3}", "g44": "g_{4,4}",
    "g45ab": "g_{4,5}^{a,b}", "g46ab": "g_{4,6}^{a,b}", "g47": "g_{4,7}",
    "g48a": "g_{4,8}^a", "g49a": "g_{4,9}^a", "g410": "g_{4,10}",
}

DOMAINS = {
    "g34a+g1": "0 <= a != 1",
    "g35a+g1": "a >= 0",
    "g42a": "a != 0",
    "g45ab": "-1 < a <= b <= 1, ab != 0; or a = -1, 0 < b <= 1",
    "g46ab": "a > 0, b real",
    "g48a": "-1 <= a <= 1",
    "g49a": "a >= 0",
}


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


@dataclass(frozen=True)
class AlgebraFamily:
    """A catalog family name with its (up to two) parameters ``(alpha, beta)``."""

    name: str
    params: tuple = ()

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise DomainError(f"unknown family {self.name!r}; expected one of {', '.join(FAMILY_NAMES)}")
        need = N_PARAMS.get(self.name, 0)
        if len(self.params) != need:
            raise DomainError(f"{self.name} takes {need} parameter(s), got {len(self.params)}")
        object.__setattr__(self, "params", tuple(_exact(p) for p in self.params))
        _check_domain(self.name, self.params)

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({', '.join(_fmt(p) for p in self.params)})"


def _fmt(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else repr(float(p))


def _check_domain(name: str, params: tuple) -> None:
    bad = False
    if name == "g34a+g1":
        (a,) = params
        bad = not (a >= 0 and a != 1)
    elif name == "g35a+g1":
        (a,) = params
        bad = a < 0
    elif name == "g42a":
        (a,) = params
        bad = a == 0
    elif name == "g45ab":
        a, b = params
        bad = not ((-1 < a <= b <= 1 and a * b != 0) or (a == -1 and 0 < b <= 1))
    elif name == "g46ab":
        a, _ = params
        bad = not a > 0
    elif name == "g48a":
        (a,) = params
        bad = not (-1 <= a <= 1)
    elif name == "g49a":
        (a,) = params
        bad = a < 0
    if bad:
        raise DomainError(f"parameters {[_fmt(p) for p in params]} outside the domain of {name}: {DOMAINS[name]}")


def _brackets(name: str, params: tuple) -> dict:
    one = Fraction(1)
    if name == "4g1":
        return {}
    if name == "g21+2g1":
        return {(1, 2): {1: one}}
    if name == "2g21":
        return {(1, 2): {1: one}, (3, 4): {3: one}}
    if name == "g31+g1":
        return {(2, 3): {1: one}}
    if name == "g32+g1":
        return {(2, 3): {1: one, 2: -one}, (3, 1): {1: one}}
    if name == "g33+g1":
        return {(2, 3): {2: -one}, (3, 1): {1: one}}
    if name == "g34a+g1":
        (a,) = params
        return {(2, 3): {1: one, 2: -a}, (3, 1): {1: a, 2: -one}}
    if name == "g35a+g1":
        (a,) = params
        return {(2, 3): {1: one, 2: -a}, (3, 1): {1: a, 2: one}}
    if name == "g36+g1":
        return {(2, 3): {1: one}, (3, 1): {2: one}, (1, 2): {3: -one}}
    if name == "g37+g1":
        return {(2, 3): {1: one}, (3, 1): {2: one}, (1, 2): {3: one}}
    if name == "g41":
        return {(2, 4): {1: one}, (3, 4): {2: one}}
    if name == "g42a":
        (a,) = params
        return {(1, 4): {1: a}, (2, 4): {2: one}, (3, 4): {2: one, 3: one}}
    if name == "g43":
        return {(1, 4): {1: one}, (3, 4): {2: one}}
    if name == "g44":
        return {(1, 4): {1: one}, (2, 4): {1: one, 2: one}, (3, 4): {2: one, 3: one}}
    if name == "g45ab":
        a, b = params
        return {(1, 4): {1: one}, (2, 4): {2: b}, (3, 4): {3: a}}
    if name == "g46ab":
        a, b = params
        return {(1, 4): {1: a}, (2, 4): {2: b, 3: -one}, (3, 4): {2: one, 3: b}}
    if name == "g47":
        return {(1, 4): {1: 2 * one}, (2, 4): {2: one}, (3, 4): {2: one, 3: one}, (2, 3): {1: one}}
    if name == "g48a":
        (a,) = params
        return {(1, 4): {1: 1 + a}, (2, 4): {2: one}, (3, 4): {3: a}, (2, 3): {1: one}}
    if name == "g49a":
        (a,) = params
        return {(1, 4): {1: 2 * a}, (2, 4): {2: a, 3: -one}, (3, 4): {2: one, 3: a}, (2, 3): {1: one}}
    if name == "g410":
        return {(1, 3): {1: one}, (2, 3): {2: one}, (1, 4): {2: -one}, (2, 4): {1: one}}
    raise DomainError(name)


def family(name: str, *params) -> AlgebraFamily:
    return AlgebraFamily(name, tuple(params))


def build_algebra(fam: AlgebraFamily | str, *params) -> StructureConstants:
    """Structure constants of a catalog family with exactly the listed commutators."""
    if isinstance(fam, str):
        fam = AlgebraFamily(fam, tuple(params))
    return StructureConstants.from_brackets(_brackets(fam.name, fam.params),
                                            family=fam.name, params=fam.params)


def catalog_k(fam: AlgebraFamily | str, *params) -> int:
    """Number of equivalence classes of generating 3-dim subspaces."""
    if isinstance(fam, str):
        fam = AlgebraFamily(fam, tuple(params))
    name, p = fam.name, fam.params
    fixed = {"4g1": 0, "g21+2g1": 1, "2g21": 2, "g31+g1": 1, "g32+g1": 3, "g33+g1": 1,
             "g35a+g1": 2, "g36+g1": 5, "g37+g1": 2, "g41": 2, "g43": 3, "g44": 2,
             "g46ab": 2, "g47": 2, "g49a": 2, "g410": 1}
    if name in fixed:
        return fixed[name]
    if name == "g34a+g1":
        return 3 if p[0] == 0 else 4
    if name == "g42a":
        return 1 if p[0] == 1 else 3
    if name == "g45ab":
        a, b = p
        if a == b == 1:
            return 0
        if (a == b) or (b == 1):
            return 1
        return 4
    if name == "g48a":
        return 1 if p[0] == 1 else 2
    raise DomainError(name)


# Parameter points covering every branch of the k-column.
REPRESENTATIVES: tuple[AlgebraFamily, ...] = tuple(
    AlgebraFamily(n, tuple(p)) for n, p in (
        ("4g1", ()), ("g21+2g1", ()), ("2g21", ()), ("g31+g1", ()), ("g32+g1", ()),
        ("g33+g1", ()), ("g34a+g1", (0,)), ("g34a+g1", (0.5,)), ("g34a+g1", (2,)),
        ("g35a+g1", (0,)), ("g35a+g1", (0.5,)), ("g36+g1", ()), ("g37+g1", ()),
        ("g41", ()), ("g42a", (1,)), ("g42a", (0.5,)), ("g42a", (-1,)), ("g42a", (2,)),
        ("g43", ()), ("g44", ()),
        ("g45ab", (1, 1)), ("g45ab", (0.5, 0.5)), ("g45ab", (-0.5, 1)), ("g45ab", (-1, 1)),
        ("g45ab", (-0.5, 0.5)), ("g45ab", (0.3, 0.7)), ("g45ab", (-1, 0.5)),
        ("g46ab", (1, 0)), ("g46ab", (0.5, 0.7)), ("g47", ()),
        ("g48a", (-1,)), ("g48a", (-0.5,)), ("g48a", (0,)), ("g48a", (0.5,)), ("g48a", (1,)),
        ("g49a", (0,)), ("g49a", (0.5,)), ("g410", ()),
    )
)


def parameter_grid(name: str, values: Sequence[float]) -> list[AlgebraFamily]:
    """All admissible parameter tuples of a family drawn from ``values``."""
    n = N_PARAMS.get(name, 0)
    if n == 0:
        return [AlgebraFamily(name)]
    out = []
    if n == 1:
        combos = [(v,) for v in values]
    else:
        combos = [(a, b) for a in values for b in values]
    for p in combos:
        try:
            out.append(AlgebraFamily(name, p))
        except DomainError:
            pass
    return out
