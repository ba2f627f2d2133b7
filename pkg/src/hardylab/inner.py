"""Rational inner functions: unimodular constants times finite Blaschke products.

A zero at the origin contributes a factor ``z``, so monomials are the
special case where every zero is 0.  Divisibility is decided on the zero
multisets, never numerically from coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

UNIMODULAR_TOL = 1e-12
MAX_ZERO_MODULUS = 1.0 - 1e-9
# zeros closer than this are treated as the same point of the multiset
ZERO_MATCH_TOL = 1e-12


def _canonical_zeros(zeros) -> tuple[complex, ...]:
    zs = [complex(a) for a in zeros]
    return tuple(sorted(zs, key=lambda a: (round(a.real, 15), round(a.imag, 15))))


def _multiset_difference(big, small):
    """``big - small`` as multisets, or None when ``small`` is not contained."""
    remaining = list(big)
    for a in small:
        for idx, b in enumerate(remaining):
            if abs(a - b) <= ZERO_MATCH_TOL:
                del remaining[idx]
                break
        else:
            return None
    return remaining


@dataclass(frozen=True)
class InnerFunction1D:
    """``constant * prod (z - a) / (1 - conj(a) z)`` over the zero multiset."""

    constant: complex = 1.0
    zeros: tuple[complex, ...] = ()

    def __post_init__(self):
        c = complex(self.constant)
        if abs(abs(c) - 1.0) > UNIMODULAR_TOL:
            raise ValueError(f"constant {c} is not unimodular")
        zeros = _canonical_zeros(self.zeros)
        for a in zeros:
            if abs(a) > MAX_ZERO_MODULUS:
                raise ValueError(f"zero {a} is too close to the unit circle")
        object.__setattr__(self, "constant", c)
        object.__setattr__(self, "zeros", zeros)

    @classmethod
    def monomial(cls, m: int, constant: complex = 1.0) -> "InnerFunction1D":
        if m < 0:
            raise ValueError("monomial degree must be non-negative")
        return cls(constant, (0j,) * m)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def is_constant(self) -> bool:
        return not self.zeros

    @property
    def is_monomial(self) -> bool:
        return all(a == 0 for a in self.zeros)

    @property
    def zero_at_origin(self) -> int:
        return sum(1 for a in self.zeros if a == 0)

    def __mul__(self, other: "InnerFunction1D") -> "InnerFunction1D":
        return InnerFunction1D(self.constant * other.constant, self.zeros + other.zeros)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.constant, dtype=complex)
        for a in self.zeros:
            out = out * (z - a) / (1 - np.conj(a) * z)
        return out

    def taylor_coeffs(self, order: int) -> np.ndarray:
        """Maclaurin coefficients through ``z**order``."""
        if order < 0:
            raise ValueError("order must be non-negative")
        c = np.zeros(order + 1, dtype=complex)
        c[0] = self.constant
        for a in self.zeros:
            if a == 0:
                c[1:] = c[:-1].copy()
                c[0] = 0
                continue
            factor = np.empty(order + 1, dtype=complex)
            factor[0] = -a
            if order >= 1:
                factor[1:] = np.conj(a) ** np.arange(order) * (1 - abs(a) ** 2)
            c = np.convolve(c, factor)[: order + 1]
        return c

    def tail_bound(self, order: int) -> float:
        """Upper bound on ``sum_{k > order} |c_k|``.

        Exactly 0 once ``order`` reaches the degree of a monomial.  Otherwise
        the coefficients up to a generous horizon are summed directly and the
        remainder is bounded by a Cauchy estimate on a circle of radius
        ``R`` in ``(1, 1/max|a|)``, where the function is analytic.
        """
        if order < 0:
            raise ValueError("order must be non-negative")
        nonzero = [a for a in self.zeros if a != 0]
        m = self.degree - len(nonzero)
        if not nonzero:
            return 0.0 if order >= m else 1.0
        horizon = order + 64 + 8 * self.degree
        coeffs = self.taylor_coeffs(horizon)
        direct = float(np.sum(np.abs(coeffs[order + 1 :])))
        rho = max(abs(a) for a in nonzero)
        # tiny zeros would push 1/rho to overflow; any radius past 1e6 is already plenty
        reach = min(1.0 / rho, 1e6)
        radii = 1.0 + (reach - 1.0) * np.linspace(0.02, 0.98, 97)
        best = np.inf
        for r in radii:
            log_sup = m * np.log(r) + sum(np.log((r + abs(a)) / (1 - abs(a) * r)) for a in nonzero)
            log_tail = log_sup - (horizon + 1) * np.log(r) - np.log(1 - 1 / r)
            best = min(best, float(np.exp(log_tail)))
        return direct + best

    def truncation_order(self, target: float = 1e-12, limit: int = 4096) -> int:
        """Smallest order ``r >= degree`` with ``tail_bound(r) <= target``."""
        if self.is_monomial:
            return self.degree
        r = self.degree
        while self.tail_bound(r) > target:
            r += 1
            if r > limit:
                raise ValueError(f"no truncation order below {limit} reaches {target}")
        return r

    def divides(self, other: "InnerFunction1D") -> "InnerFunction1D | None":
        """Quotient ``other / self`` when it is inner, else None."""
        rest = _multiset_difference(other.zeros, self.zeros)
        if rest is None:
            return None
        return InnerFunction1D(other.constant / self.constant, rest)

    def to_spec(self) -> dict:
        if self.is_monomial and self.constant == 1:
            return {"monomial": self.degree}
        zeros: list[list[float]] = []
        for a in self.zeros:
            if zeros and zeros[-1][0] == a.real and zeros[-1][1] == a.imag:
                zeros[-1][2] += 1
            else:
                zeros.append([a.real, a.imag, 1])
        return {"constant": [self.constant.real, self.constant.imag], "zeros": zeros}

    @classmethod
    def from_spec(cls, spec) -> "InnerFunction1D":
        """Parse ``{"monomial": m}`` or ``{"constant": [re, im], "zeros": [[re, im, mult], ...]}``."""
        if not isinstance(spec, dict):
            raise ValueError(f"inner function description must be an object, got {spec!r}")
        extra = set(spec) - {"monomial", "constant", "zeros", "order"}
        if extra:
            raise ValueError(f"unknown inner function fields: {sorted(extra)}")
        if "monomial" in spec:
            if "zeros" in spec or "constant" in spec:
                raise ValueError("monomial shorthand cannot be combined with zeros/constant")
            return cls.monomial(int(spec["monomial"]))
        re, im = spec.get("constant", [1.0, 0.0])
        zeros = []
        for entry in spec.get("zeros", []):
            if len(entry) == 2:
                entry = [*entry, 1]
            zr, zi, mult = entry
            if int(mult) < 1:
                raise ValueError("zero multiplicity must be positive")
            zeros.extend([complex(zr, zi)] * int(mult))
        return cls(complex(re, im), tuple(zeros))


@dataclass(frozen=True)
class InnerFunctionProd:
    """Coordinate product ``prod_i f_i(z_i)`` of one-variable inner functions."""

    factors: tuple[InnerFunction1D, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("a product needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def monomial(cls, exponents: Sequence[int]) -> "InnerFunctionProd":
        return cls(tuple(InnerFunction1D.monomial(int(m)) for m in exponents))

    @classmethod
    def lift(cls, f: "InnerFunction1D | InnerFunctionProd") -> "InnerFunctionProd":
        return f if isinstance(f, InnerFunctionProd) else cls((f,))

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.factors)

    @property
    def is_constant(self) -> bool:
        return all(f.is_constant for f in self.factors)

    @property
    def is_monomial(self) -> bool:
        return all(f.is_monomial for f in self.factors)

    def __mul__(self, other: "InnerFunctionProd") -> "InnerFunctionProd":
        if other.m != self.m:
            raise ValueError("products act on different numbers of variables")
        return InnerFunctionProd(tuple(f * g for f, g in zip(self.factors, other.factors)))

    def __call__(self, *z):
        if len(z) != self.m:
            raise ValueError(f"expected {self.m} arguments")
        out = 1.0
        for f, zi in zip(self.factors, z):
            out = out * f(zi)
        return out

    def divides(self, other: "InnerFunctionProd") -> "InnerFunctionProd | None":
        if other.m != self.m:
            return None
        quotients = [f.divides(g) for f, g in zip(self.factors, other.factors)]
        if any(q is None for q in quotients):
            return None
        return InnerFunctionProd(tuple(quotients))

    def to_spec(self) -> dict:
        if self.is_monomial and all(f.constant == 1 for f in self.factors):
            return {"monomial": [f.degree for f in self.factors]}
        return {"product": [f.to_spec() for f in self.factors]}

    @classmethod
    def from_spec(cls, spec, m: int | None = None) -> "InnerFunctionProd":
        """Parse ``{"monomial": [m1, ...]}``, ``{"product": [f1, ...]}`` or a one-variable spec."""
        if isinstance(spec, dict) and "product" in spec:
            if set(spec) - {"product"}:
                raise ValueError("product description takes only the 'product' field")
            prod = cls(tuple(InnerFunction1D.from_spec(f) for f in spec["product"]))
        elif isinstance(spec, dict) and isinstance(spec.get("monomial"), list):
            if set(spec) - {"monomial"}:
                raise ValueError("monomial product description takes only the 'monomial' field")
            prod = cls.monomial(spec["monomial"])
        else:
            prod = cls((InnerFunction1D.from_spec(spec),))
        if m is not None and prod.m != m:
            raise ValueError(f"inner function acts on {prod.m} variables, expected {m}")
        return prod


InnerFunction = Union[InnerFunction1D, InnerFunctionProd]


def divides(f: InnerFunction, g: InnerFunction):
    """Quotient ``g / f`` when ``f`` divides ``g`` as an inner function, else None."""
    if isinstance(f, InnerFunctionProd) or isinstance(g, InnerFunctionProd):
        return InnerFunctionProd.lift(f).divides(InnerFunctionProd.lift(g))
    return f.divides(g)


INCREASING = "increasing"
DECREASING = "decreasing"


@dataclass(frozen=True)
class SequenceReport:
    ok: bool
    pair: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class InnerSeq:
    """Finite piece of an increasing or decreasing inner sequence.

    Only consecutive listed pairs are checked; nothing is assumed about an
    infinite continuation.
    """

    direction: str
    terms: tuple[InnerFunction, ...]

    def __post_init__(self):
        if self.direction not in (INCREASING, DECREASING):
            raise ValueError(f"direction must be increasing or decreasing, got {self.direction!r}")
        terms = tuple(self.terms)
        if not terms:
            raise ValueError("an inner sequence needs at least one term")
        object.__setattr__(self, "terms", terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, j):
        return self.terms[j]

    @property
    def variables(self) -> int:
        return InnerFunctionProd.lift(self.terms[0]).m

    def as_products(self) -> tuple[InnerFunctionProd, ...]:
        return tuple(InnerFunctionProd.lift(t) for t in self.terms)

    def validate(self) -> SequenceReport:
        return validate_inner_sequence(self)

    def to_spec(self) -> dict:
        return {"direction": self.direction, "terms": [t.to_spec() for t in self.terms]}

    @classmethod
    def from_spec(cls, spec, m: int | None = None) -> "InnerSeq":
        if not isinstance(spec, dict) or set(spec) - {"direction", "terms"}:
            raise ValueError("sequence description needs exactly 'direction' and 'terms'")
        terms = []
        for t in spec["terms"]:
            prod = InnerFunctionProd.from_spec(t, m)
            terms.append(prod.factors[0] if prod.m == 1 else prod)
        return cls(spec["direction"], tuple(terms))


def validate_inner_sequence(seq: InnerSeq) -> SequenceReport:
    arity = {InnerFunctionProd.lift(t).m for t in seq.terms}
    if len(arity) != 1:
        return SequenceReport(False, None, "terms act on different numbers of variables")
    for j in range(len(seq.terms) - 1):
        a, b = seq.terms[j], seq.terms[j + 1]
        small, big = (a, b) if seq.direction == INCREASING else (b, a)
        q = divides(small, big)
        # pairs are reported 1-based, matching the usual sequence indexing
        if q is None:
            return SequenceReport(False, (j + 1, j + 2), "ratio is not inner")
        if q.is_constant:
            return SequenceReport(False, (j + 1, j + 2), "quotient constant")
    return SequenceReport(True)
