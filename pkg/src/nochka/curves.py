"""Curve coordinates and their evaluation.

A coordinate is either an exact polynomial in z or a finite sum of terms
c * z^k * exp(p(z)) with polynomial exponents.  Circle evaluation returns
log-magnitudes and max-rescaled values so that downstream quadrature never
overflows on homogeneous targets: for a homogeneous Q of degree d,
log|Q(f)| = d*log||f|| + log|Q(w)| with w = f * exp(-log||f||).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ParseError
from .poly import Polynomial
from .univar import QQi, UnivariatePoly, poly_gcd_many


@dataclass(frozen=True)
class ExpTerm:
    """One exponential term c * z^power * exp(exponent(z))."""

    coef: QQi
    power: int
    exponent: UnivariatePoly


class CurveCoordinate:
    """Polynomial or exponential-polynomial coordinate function."""

    __slots__ = ("poly", "terms")

    def __init__(self, *, poly: UnivariatePoly | None = None,
                 terms: Sequence[ExpTerm] | None = None):
        if (poly is None) == (terms is None):
            raise ValueError("exactly one of poly/terms must be given")
        if terms is not None:
            kept = tuple(t for t in terms if not t.coef.is_zero)
            if all(t.exponent.is_zero for t in kept):
                poly = UnivariatePoly.from_pairs((t.coef, t.power) for t in kept)
                terms = None
            else:
                terms = kept
        self.poly = poly
        self.terms = terms

    @classmethod
    def from_poly(cls, poly: UnivariatePoly) -> "CurveCoordinate":
        return cls(poly=poly)

    @classmethod
    def from_terms(cls, terms: Sequence[ExpTerm]) -> "CurveCoordinate":
        return cls(terms=terms)

    @property
    def kind(self) -> str:
        return "polynomial" if self.poly is not None else "exponential-polynomial"

    @property
    def is_polynomial(self) -> bool:
        return self.poly is not None

    @property
    def is_zero(self) -> bool:
        return self.poly is not None and self.poly.is_zero

    @property
    def is_nonzero_constant(self) -> bool:
        return self.poly is not None and self.poly.degree == 0

    def derivative(self) -> "CurveCoordinate":
        if self.poly is not None:
            return CurveCoordinate(poly=self.poly.derivative())
        out: list[ExpTerm] = []
        for t in self.terms:
            if t.power:
                out.append(ExpTerm(t.coef * t.power, t.power - 1, t.exponent))
            dp = t.exponent.derivative()
            for i, a in enumerate(dp.coeffs):
                if not a.is_zero:
                    out.append(ExpTerm(t.coef * a, t.power + i, t.exponent))
        return CurveCoordinate(terms=out) if out else CurveCoordinate(poly=UnivariatePoly())

    def eval_array(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        if self.poly is not None:
            return self.poly.eval_array(z)
        total = np.zeros_like(z)
        with np.errstate(over="ignore", invalid="ignore"):
            for t in self.terms:
                total = total + complex(t.coef) * z ** t.power * np.exp(t.exponent.eval_array(z))
        return total

    def log_values(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (L, w) with the coordinate value equal to w * exp(L), |w| <= #terms.

        For polynomial coordinates L = 0; for exponential sums L is the
        largest term log-magnitude, keeping w in floating range.
        """
        z = np.asarray(z, dtype=np.complex128)
        if self.poly is not None:
            return np.zeros(z.shape), self.poly.eval_array(z)
        logs = []
        with np.errstate(divide="ignore"):
            for t in self.terms:
                logs.append(np.log(np.abs(complex(t.coef)))
                            + t.power * np.log(z) + t.exponent.eval_array(z))
        stacked = np.stack(logs)
        L = np.max(stacked.real, axis=0)
        w = np.sum(np.exp(stacked - L), axis=0)
        return L, w

    def log_abs_array(self, z: np.ndarray) -> np.ndarray:
        L, w = self.log_values(z)
        with np.errstate(divide="ignore"):
            return L + np.log(np.abs(w))

    def to_text(self) -> str:
        if self.poly is not None:
            return self.poly.to_text()
        parts = []
        for t in self.terms:
            coef = t.coef
            sign = "+"
            if coef.im == 0 and coef.re < 0:
                sign, coef = "-", -coef
            body = _coef_text(coef)
            if t.power == 1:
                body += "*z"
            elif t.power > 1:
                body += f"*z^{t.power}"
            body += f"*exp({t.exponent.to_text()})"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"CurveCoordinate({self.to_text()})"


def _coef_text(c: QQi) -> str:
    text = str(c)
    if ("+" in text[1:]) or ("-" in text[1:]) or text.endswith("i"):
        return f"({text})"
    return text


class ProjectiveCurve:
    """Reduced representation of a holomorphic curve by M+1 coordinates."""

    __slots__ = ("coordinates", "reduced_verified")

    def __init__(self, coordinates: Sequence[CurveCoordinate]):
        coords = tuple(coordinates)
        if len(coords) < 2:
            raise ValueError("need at least two coordinates")
        if all(c.is_zero for c in coords):
            raise ValueError("all coordinates vanish")
        self.coordinates = coords
        self.reduced_verified = self._verify_reduced()

    def _verify_reduced(self) -> bool:
        if self.all_polynomial:
            g = poly_gcd_many([c.poly for c in self.coordinates if not c.is_zero])
            if g.degree > 0:
                raise ValueError("coordinates share a common factor; representation is not reduced")
            return True
        # a nowhere-zero coordinate certifies reducedness for mixed sums
        return any(c.is_nonzero_constant for c in self.coordinates)

    @property
    def all_polynomial(self) -> bool:
        return all(c.is_polynomial for c in self.coordinates)

    @property
    def ambient_dim(self) -> int:
        return len(self.coordinates) - 1

    @property
    def max_degree(self) -> int:
        if not self.all_polynomial:
            raise ValueError("degree defined for polynomial curves only")
        return max(c.poly.degree for c in self.coordinates)

    def circle_values(self, r: float, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (L, W): L = log max_i |f_i| on |z| = r, W the coordinates scaled by exp(-L)."""
        z = r * np.exp(1j * thetas)
        logs = []
        scaled = []
        for c in self.coordinates:
            Lc, w = c.log_values(z)
            with np.errstate(divide="ignore"):
                logs.append(Lc + np.log(np.abs(w)))
            scaled.append((Lc, w))
        L = np.max(np.stack(logs), axis=0)
        W = np.stack([w * np.exp(Lc - L) for Lc, w in scaled])
        return L, W

    def to_text(self) -> str:
        lines = [f"[curve] M={self.ambient_dim}"]
        lines.extend(c.to_text() for c in self.coordinates)
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"ProjectiveCurve({', '.join(c.to_text() for c in self.coordinates)})"


class _CurveScanner:
    def __init__(self, text: str, line: int | None = None):
        self.text = text
        self.pos = 0
        self.line = line

    def error(self, message: str) -> ParseError:
        return ParseError(message, line=self.line, column=self.pos + 1)

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def match_word(self, word: str) -> bool:
        self.peek()
        if self.text.startswith(word, self.pos):
            after = self.pos + len(word)
            nxt = self.text[after] if after < len(self.text) else ""
            if not (nxt.isalnum() or nxt == "_"):
                self.pos = after
                return True
        return False

    def integer(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def rational(self) -> Fraction:
        num = self.integer()
        if self.peek() == "/":
            self.take()
            den = self.integer()
            if den == 0:
                raise self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)


def _parse_complex_atom(sc: _CurveScanner, sign: int) -> QQi:
    """rational ['i'] or bare 'i'."""
    if sc.peek() == "i" and not sc.text.startswith("i", sc.pos + 1):
        nxt = sc.text[sc.pos + 1] if sc.pos + 1 < len(sc.text) else ""
        if not (nxt.isalnum() or nxt == "_"):
            sc.take()
            return QQi(0, sign)
    value = sc.rational() * sign
    if sc.peek() == "i":
        sc.take()
        return QQi(0, value)
    return QQi(value)


def _parse_paren_complex(sc: _CurveScanner) -> QQi:
    sc.take()  # (
    total = QQi(0)
    sign = 1
    if sc.peek() in "+-":
        sign = -1 if sc.take() == "-" else 1
    total = total + _parse_complex_atom(sc, sign)
    while sc.peek() in "+-":
        sign = -1 if sc.take() == "-" else 1
        total = total + _parse_complex_atom(sc, sign)
    if sc.peek() != ")":
        raise sc.error("expected ')'")
    sc.take()
    return total


def _parse_term(sc: _CurveScanner, sign: int) -> tuple[QQi, int, UnivariatePoly]:
    coef = QQi(sign)
    power = 0
    exponent = UnivariatePoly()
    saw_factor = False
    while True:
        ch = sc.peek()
        if sc.match_word("exp"):
            if sc.peek() != "(":
                raise sc.error("expected '(' after exp")
            sc.take()
            depth = 1
            start = sc.pos
            while sc.pos < len(sc.text) and depth:
                c = sc.text[sc.pos]
                if c == "(":
                    depth += 1
                elif c == ")":
                    depth -= 1
                sc.pos += 1
            if depth:
                raise sc.error("unbalanced parentheses in exp(...)")
            inner = sc.text[start:sc.pos - 1]
            arg = parse_coordinate(inner, line=sc.line)
            if not arg.is_polynomial:
                raise sc.error("exp argument must be a polynomial in z")
            exponent = exponent + arg.poly
        elif ch == "z":
            sc.take()
            k = 1
            if sc.peek() == "^":
                sc.take()
                k = sc.integer()
                if k < 0:
                    raise sc.error("exponent must be nonnegative")
            power += k
        elif ch == "(":
            coef = coef * _parse_paren_complex(sc)
        elif ch.isdigit() or ch == "i":
            coef = coef * _parse_complex_atom(sc, 1)
        else:
            raise sc.error(f"expected a factor, found {ch!r}" if ch else "expected a factor")
        saw_factor = True
        if sc.peek() == "*":
            sc.take()
            continue
        break
    if not saw_factor:
        raise sc.error("empty term")
    return coef, power, exponent


def parse_coordinate(text: str, *, line: int | None = None) -> CurveCoordinate:
    """Parse one coordinate: terms in z and exp(poly) joined by +/-.

    Complex literals use rational parts with an `i` suffix; signed
    complex constants must be parenthesized, e.g. `(1-1/2i)*z^2`.
    """
    sc = _CurveScanner(text, line)
    terms: list[ExpTerm] = []
    first = True
    while True:
        ch = sc.peek()
        if not ch:
            if first:
                raise sc.error("empty coordinate")
            break
        sign = 1
        if ch in "+-":
            sc.take()
            sign = -1 if ch == "-" else 1
        elif not first:
            raise sc.error(f"expected '+' or '-', found {ch!r}")
        coef, power, exponent = _parse_term(sc, sign)
        terms.append(ExpTerm(coef, power, exponent))
        first = False
    return CurveCoordinate(terms=terms)


def parse_curve(text: str) -> ProjectiveCurve:
    """Parse the curve file format: a `[curve] M=<int>` header, then one coordinate per line."""
    lines = text.splitlines()
    header_idx = None
    for i, raw in enumerate(lines):
        if raw.strip():
            header_idx = i
            break
    if header_idx is None:
        raise ParseError("empty curve file")
    header = lines[header_idx].strip()
    if not header.startswith("[curve]"):
        raise ParseError("curve file must start with `[curve] M=<int>`", line=header_idx + 1)
    rest = header[len("[curve]"):].strip()
    if not rest.startswith("M="):
        raise ParseError("curve header must carry M=<int>", line=header_idx + 1)
    try:
        M = int(rest[2:])
    except ValueError:
        raise ParseError(f"bad ambient dimension {rest[2:]!r}", line=header_idx + 1) from None
    coords = []
    for offset, raw in enumerate(lines[header_idx + 1:], header_idx + 2):
        if raw.strip():
            coords.append(parse_coordinate(raw.strip(), line=offset))
    if len(coords) != M + 1:
        raise ParseError(f"expected {M + 1} coordinates, got {len(coords)}")
    return ProjectiveCurve(coords)


def compose_polynomial(target: Polynomial, curve: ProjectiveCurve) -> UnivariatePoly:
    """Exact composition Q(f_0, ..., f_M) for an all-polynomial curve."""
    if not curve.all_polynomial:
        raise ValueError("exact composition needs a polynomial curve")
    if target.nvars != curve.ambient_dim + 1:
        raise ValueError(f"target has {target.nvars} variables, curve has {curve.ambient_dim + 1}")
    values = [c.poly for c in curve.coordinates]
    result = target.evaluate_exact(
        values, UnivariatePoly.constant(1)) if target.terms else UnivariatePoly()
    return result


class ComposedTarget:
    """Numeric Q(f) with derivative, for contour work on exponential curves."""

    __slots__ = ("target", "curve", "_partials", "_coord_derivs", "label")

    def __init__(self, target: Polynomial, curve: ProjectiveCurve, label: str = ""):
        if target.nvars != curve.ambient_dim + 1:
            raise ValueError("variable count mismatch")
        self.target = target
        self.curve = curve
        self._partials = [target.derivative(i) for i in range(target.nvars)]
        self._coord_derivs = [c.derivative() for c in curve.coordinates]
        self.label = label

    def value(self, z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            coords = [c.eval_array(z) for c in self.curve.coordinates]
            return self.target.evaluate_array(coords)

    def deriv(self, z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", invalid="ignore"):
            coords = [c.eval_array(z) for c in self.curve.coordinates]
            total = np.zeros(np.shape(z), dtype=np.complex128)
            for partial, dc in zip(self._partials, self._coord_derivs):
                if partial.is_zero:
                    continue
                total = total + partial.evaluate_array(coords) * dc.eval_array(z)
        return total
