"""Exact multivariate polynomials over the rationals with Groebner machinery.

Monomials are exponent tuples; a polynomial maps monomials to nonzero
`Fraction`s.  Everything here stays exact: the dimension and rank queries
feeding position checks must never see floating point.  The default term
order is degree-reverse-lexicographic.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import ParseError, ResourceBudgetError, VerificationError

Monomial = tuple[int, ...]

DEFAULT_GB_STEPS = 20_000
DEFAULT_SLICE_BUDGET = 2_000_000


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_quotient(a: Monomial, b: Monomial) -> Monomial:
    """a / b componentwise; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


def key_degrevlex(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


def key_lex(m: Monomial):
    return m


TERM_ORDERS: dict[str, Callable[[Monomial], object]] = {
    "degrevlex": key_degrevlex,
    "lex": key_lex,
}


def order_key(order: str) -> Callable[[Monomial], object]:
    try:
        return TERM_ORDERS[order]
    except KeyError:
        raise ValueError(f"unknown term order {order!r}") from None


def monomials_of_degree(nvars: int, degree: int) -> Iterator[Monomial]:
    """All exponent tuples of the given total degree, lexicographically descending."""
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono} for {nvars} variables")
            clean[mono] = coeff
        self.nvars = nvars
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        mono = [0] * nvars
        mono[index] = 1
        return cls(nvars, {tuple(mono): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, mono: Monomial, coeff=1) -> "Polynomial":
        return cls(nvars, {tuple(mono): Fraction(coeff)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    @property
    def is_homogeneous(self) -> bool:
        degrees = {sum(m) for m in self.terms}
        return len(degrees) <= 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) - c
        return Polynomial(self.nvars, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            out: dict[Monomial, Fraction] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = mono_mul(m1, m2)
                    out[m] = out.get(m, Fraction(0)) + c1 * c2
            return Polynomial(self.nvars, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, factor) -> "Polynomial":
        factor = Fraction(factor)
        return Polynomial(self.nvars, {m: c * factor for m, c in self.terms.items()})

    def mono_scale(self, mono: Monomial, coeff) -> "Polynomial":
        coeff = Fraction(coeff)
        return Polynomial(self.nvars,
                          {mono_mul(m, mono): c * coeff for m, c in self.terms.items()})

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def leading_term(self, key) -> tuple[Monomial, Fraction]:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def monic(self, key) -> "Polynomial":
        _, lc = self.leading_term(key)
        return self.scale(1 / lc)

    def derivative(self, index: int) -> "Polynomial":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[index]
            if e:
                lowered = list(m)
                lowered[index] = e - 1
                out[tuple(lowered)] = c * e
        return Polynomial(self.nvars, out)

    def sorted_terms(self, order: str = "degrevlex") -> list[tuple[Monomial, Fraction]]:
        key = order_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def evaluate_exact(self, values: Sequence, one):
        """Evaluate at field elements; `one` seeds the constant accumulator."""
        total = None
        for mono, coeff in self.terms.items():
            term = one
            for i, e in enumerate(mono):
                for _ in range(e):
                    term = term * values[i]
            term = term * coeff
            total = term if total is None else total + term
        return total if total is not None else one * 0

    def evaluate_array(self, values: Sequence[np.ndarray]) -> np.ndarray:
        """Numeric evaluation with complex128 arithmetic, vectorized over arrays."""
        shape = np.broadcast(*values).shape if len(values) > 1 else np.shape(values[0])
        total = np.zeros(shape, dtype=np.complex128)
        for mono, coeff in self.terms.items():
            term = np.full(shape, complex(coeff), dtype=np.complex128)
            for i, e in enumerate(mono):
                if e:
                    term = term * values[i] ** e
            total = total + term
        return total

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def to_text(self, varnames: Sequence[str], order: str = "degrevlex") -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for mono, coeff in self.sorted_terms(order):
            factors = []
            for name, e in zip(varnames, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coeff)
            body = "*".join(factors)
            if not factors:
                body = str(mag)
            elif mag != 1:
                body = f"{mag}*{body}"
            sign = "-" if coeff < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Polynomial({self.to_text(names)})"


def normal_form(p: Polynomial, divisors: Sequence[Polynomial],
                order: str = "degrevlex") -> Polynomial:
    """Remainder of p under multivariate division by the divisor list."""
    key = order_key(order)
    prepared = [(g, *g.leading_term(key)) for g in divisors if not g.is_zero]
    work = dict(p.terms)
    remainder: dict[Monomial, Fraction] = {}
    while work:
        m = max(work, key=key)
        c = work[m]
        for g, lm, lc in prepared:
            if mono_divides(lm, m):
                quot = mono_quotient(m, lm)
                factor = c / lc
                for gm, gc in g.terms.items():
                    target = mono_mul(gm, quot)
                    value = work.get(target, Fraction(0)) - factor * gc
                    if value:
                        work[target] = value
                    else:
                        work.pop(target, None)
                break
        else:
            remainder[m] = c
            del work[m]
    return Polynomial(p.nvars, remainder)


def _s_polynomial(f: Polynomial, g: Polynomial, key) -> Polynomial:
    lmf, lcf = f.leading_term(key)
    lmg, lcg = g.leading_term(key)
    l = mono_lcm(lmf, lmg)
    return (f.mono_scale(mono_quotient(l, lmf), 1 / lcf)
            - g.mono_scale(mono_quotient(l, lmg), 1 / lcg))


def groebner_basis(generators: Iterable[Polynomial], order: str = "degrevlex",
                   max_steps: int = DEFAULT_GB_STEPS) -> tuple[Polynomial, ...]:
    """Reduced Groebner basis via Buchberger.

    Pair selection is by minimal (degree, order-key) of the pair lcm --
    the sugar strategy for homogeneous input.  Coprime leading terms and
    the chain criterion prune pairs.  Exceeding `max_steps` pair
    reductions raises ResourceBudgetError.
    """
    key = order_key(order)
    basis: list[Polynomial] = []
    for g in generators:
        if not g.is_zero and g not in basis:
            basis.append(g)
    if not basis:
        return ()
    nvars = basis[0].nvars
    if any(g.nvars != nvars for g in basis):
        raise ValueError("generators live in different rings")
    basis = [g.monic(key) for g in basis]

    lead = [g.leading_term(key)[0] for g in basis]
    heap: list[tuple] = []

    def push_pair(i: int, j: int):
        l = mono_lcm(lead[i], lead[j])
        heapq.heappush(heap, (sum(l), key(l), i, j))

    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            push_pair(i, j)

    done_pairs: set[tuple[int, int]] = set()
    steps = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        done_pairs.add((i, j))
        l = mono_lcm(lead[i], lead[j])
        if l == mono_mul(lead[i], lead[j]):
            continue  # coprime leading terms
        chain = False
        for k in range(len(basis)):
            if k in (i, j) or not mono_divides(lead[k], l):
                continue
            p1 = (min(i, k), max(i, k))
            p2 = (min(j, k), max(j, k))
            if p1 in done_pairs and p2 in done_pairs:
                chain = True
                break
        if chain:
            continue
        steps += 1
        if steps > max_steps:
            raise ResourceBudgetError(f"Groebner step budget {max_steps} exceeded")
        r = normal_form(_s_polynomial(basis[i], basis[j], key), basis, order)
        if r.is_zero:
            continue
        r = r.monic(key)
        basis.append(r)
        lead.append(r.leading_term(key)[0])
        new = len(basis) - 1
        for t in range(new):
            push_pair(t, new)

    # minimalize: drop elements whose leading term another leading term divides
    minimal: list[Polynomial] = []
    for g in sorted(basis, key=lambda h: key(h.leading_term(key)[0])):
        lm = g.leading_term(key)[0]
        if not any(mono_divides(h.leading_term(key)[0], lm) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r = normal_form(g, others, order)
        if not r.is_zero:
            reduced.append(r.monic(key))
    reduced.sort(key=lambda h: key(h.leading_term(key)[0]))
    return tuple(reduced)


class Ideal:
    """Homogeneous ideal with a lazily cached reduced Groebner basis."""

    __slots__ = ("generators", "nvars", "order", "_gb")

    def __init__(self, generators: Iterable[Polynomial], nvars: int | None = None,
                 order: str = "degrevlex"):
        gens = tuple(g for g in generators if not g.is_zero)
        if nvars is None:
            if not gens:
                raise ValueError("nvars required for the zero ideal")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise ValueError("generators live in different rings")
            if not g.is_homogeneous:
                raise ValueError("generators must be homogeneous")
        order_key(order)
        self.generators = gens
        self.nvars = nvars
        self.order = order
        self._gb: tuple[Polynomial, ...] | None = None

    def groebner(self, max_steps: int = DEFAULT_GB_STEPS) -> tuple[Polynomial, ...]:
        if self._gb is None:
            gb = groebner_basis(self.generators, self.order, max_steps)
            for g in self.generators:
                if not normal_form(g, gb, self.order).is_zero:
                    raise VerificationError("generator does not reduce to zero against its basis")
            self._gb = gb
        return self._gb

    def normal_form(self, p: Polynomial, max_steps: int = DEFAULT_GB_STEPS) -> Polynomial:
        return normal_form(p, self.groebner(max_steps), self.order)

    def __repr__(self) -> str:
        return f"Ideal({len(self.generators)} generators in {self.nvars} variables)"


def ideal_dimension(ideal: Ideal, max_steps: int = DEFAULT_GB_STEPS) -> int:
    """Projective dimension of the vanishing set; -1 for the empty projective set.

    Computed combinatorially on the leading-term ideal: the affine
    dimension of the quotient is the largest variable subset containing no
    generator support.  When that count is zero the emptiness is
    cross-checked by reducing variable powers to zero.
    """
    gb = ideal.groebner(max_steps)
    if any(g.degree == 0 for g in gb):
        return -1
    key = order_key(ideal.order)
    supports = [frozenset(i for i, e in enumerate(g.leading_term(key)[0]) if e)
                for g in gb]
    nvars = ideal.nvars
    best = 0
    for mask in range(1 << nvars):
        members = frozenset(i for i in range(nvars) if mask >> i & 1)
        if len(members) <= best:
            continue
        if all(not s <= members for s in supports):
            best = len(members)
    if best == 0 and gb:
        _check_irrelevant(ideal, max_steps)
    return best - 1


def _check_irrelevant(ideal: Ideal, max_steps: int) -> None:
    """Cross-check emptiness: every variable power must reduce to zero."""
    gb = ideal.groebner(max_steps)
    k = max(g.degree for g in gb) + 1
    for _ in range(2):
        if all(ideal.normal_form(
                Polynomial.monomial(ideal.nvars, tuple(k if i == v else 0
                                                       for i in range(ideal.nvars))),
                max_steps).is_zero
               for v in range(ideal.nvars)):
            return
        k *= 2
    raise VerificationError("leading-term dimension says empty but variable powers do not vanish")


def degree_m_slice_rank(ideal: Ideal, m: int, max_steps: int = DEFAULT_GB_STEPS,
                        budget: int = DEFAULT_SLICE_BUDGET) -> int:
    """Dimension of the degree-m slice of the ideal as a rational vector space.

    Equals the count of degree-m monomials divisible by some leading term
    of the reduced basis (the quotient keeps the same Hilbert function as
    its leading-term degeneration).
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    total = comb(ideal.nvars - 1 + m, m)
    if total > budget:
        raise ResourceBudgetError(f"degree-{m} slice has {total} monomials > budget {budget}")
    gb = ideal.groebner(max_steps)
    if not gb:
        return 0
    key = order_key(ideal.order)
    leads = [g.leading_term(key)[0] for g in gb]
    return sum(1 for mono in monomials_of_degree(ideal.nvars, m)
               if any(mono_divides(lt, mono) for lt in leads))


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def error(self, message: str) -> ParseError:
        return ParseError(message, column=self.pos + 1)

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def name(self) -> str:
        self.skip_ws()
        start = self.pos
        while (self.pos < len(self.text)
               and (self.text[self.pos].isalnum() or self.text[self.pos] == "_")):
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a name")
        return self.text[start:self.pos]


def parse_polynomial(text: str, varnames: Sequence[str], *,
                     require_homogeneous: bool = False,
                     require_nonzero: bool = False) -> Polynomial:
    """Parse `terms` separated by +/-; term = [rational] factors joined by `*`.

    A factor is a variable with optional `^power` or a rational `a` / `a/b`.
    Whitespace is insignificant.  Errors carry the character position.
    """
    index = {name: i for i, name in enumerate(varnames)}
    nvars = len(varnames)
    sc = _Scanner(text)
    result = Polynomial.zero(nvars)
    sign = 1
    first = True
    while True:
        ch = sc.peek()
        if not ch:
            if first:
                raise sc.error("empty polynomial")
            break
        if ch in "+-":
            sc.take()
            sign = -1 if ch == "-" else 1
            ch = sc.peek()
        elif not first:
            raise sc.error(f"expected '+' or '-', found {ch!r}")
        if not ch:
            raise sc.error("dangling sign")
        coeff = Fraction(sign)
        mono = [0] * nvars
        while True:
            ch = sc.peek()
            if ch.isdigit():
                num = sc.integer()
                if sc.peek() == "/":
                    sc.take()
                    den = sc.integer()
                    if den == 0:
                        raise sc.error("zero denominator")
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif ch.isalpha() or ch == "_":
                name = sc.name()
                if name not in index:
                    raise ParseError(f"unknown variable {name!r}", column=sc.pos)
                power = 1
                if sc.peek() == "^":
                    sc.take()
                    power = sc.integer()
                    if power < 1:
                        raise sc.error("exponent must be a positive integer")
                mono[index[name]] += power
            else:
                raise sc.error(f"expected a factor, found {ch!r}" if ch else "expected a factor")
            if sc.peek() == "*":
                sc.take()
                continue
            break
        result = result + Polynomial.monomial(nvars, tuple(mono), coeff)
        first = False
    if require_nonzero and result.is_zero:
        raise ParseError("polynomial must be nonzero")
    if require_homogeneous and not result.is_homogeneous:
        raise ParseError("polynomial must be homogeneous")
    return result
