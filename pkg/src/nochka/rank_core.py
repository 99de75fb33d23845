"""Abstract rank oracles and exact Nochka weights.

A rank oracle materializes a codimension function c on all subsets of
{1..q} as a table indexed by bitmask.  This module validates the
combinatorial axioms such a function satisfies for an arrangement in
N-subgeneral position, builds the minimal-ratio filtration, derives exact
rational weights from it, and performs the greedy selection of a
general-position subfamily dominating a weighted cost sum.

Subsets are bitmasks internally (bit j-1 <-> index j); the public API
accepts 1-based index iterables.  All ratios and weights are
`fractions.Fraction`; no comparison in this module involves a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, VerificationError

MAX_GROUND_SET = 20

AXIOM_NAMES = (
    "empty-set",
    "nonzero-singletons",
    "monotone",
    "unit-increment",
    "capped",
    "spanning",
    "submodular",
    "exchange",
)


def mask_of(indices: Iterable[int], q: int) -> int:
    mask = 0
    for j in indices:
        if not 1 <= int(j) <= q:
            raise ValueError(f"index {j} outside 1..{q}")
        mask |= 1 << (int(j) - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


def _set_str(mask: int) -> str:
    return "{" + ",".join(map(str, indices_of(mask))) + "}"


def _popcounts(q: int) -> np.ndarray:
    masks = np.arange(1 << q, dtype=np.int64)
    pc = np.zeros(1 << q, dtype=np.int64)
    for b in range(q):
        pc += (masks >> b) & 1
    return pc


@dataclass(frozen=True)
class RankOracle:
    """Codimension function c: 2^{1..q} -> {0..n+1}, materialized as a table.

    `table[mask]` holds c of the subset encoded by `mask`.  Constructing an
    oracle only checks shape and value range; `validate_rank_oracle` checks
    the combinatorial axioms.
    """

    q: int
    n: int
    N: int
    table: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.q <= MAX_GROUND_SET:
            raise ValueError(f"q must be in 1..{MAX_GROUND_SET}, got {self.q}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.N < self.n:
            raise ValueError(f"N must be >= n, got N={self.N} < n={self.n}")
        if len(self.table) != 1 << self.q:
            raise ValueError(f"table must have 2^{self.q} entries, got {len(self.table)}")
        for mask, value in enumerate(self.table):
            if not isinstance(value, int) or not 0 <= value <= self.n + 1:
                raise ValueError(f"c{_set_str(mask)} = {value!r} outside 0..{self.n + 1}")

    def c_mask(self, mask: int) -> int:
        return self.table[mask]

    def c(self, subset: Iterable[int]) -> int:
        return self.table[mask_of(subset, self.q)]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    ok: bool
    witness: str | None = None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    checks: tuple[AxiomCheck, ...]

    def failures(self) -> tuple[AxiomCheck, ...]:
        return tuple(c for c in self.checks if not c.ok)

    def summary(self) -> str:
        if self.ok:
            return "all axioms hold"
        return "; ".join(f"{c.axiom} fails at {c.witness}" for c in self.failures())

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"axiom": c.axiom, "ok": c.ok, "witness": c.witness}
                for c in self.checks
            ],
        }


def validate_rank_oracle(oracle: RankOracle) -> ValidationReport:
    """Exhaustively check the oracle axioms; each failure carries a witness.

    Monotonicity and unit increments are checked over all single-element
    extensions (equivalent to the subset-pair statements by chaining).
    Submodularity is checked in the equivalent local form
    c(K+i+j) + c(K) <= c(K+i) + c(K+j).  The exchange property is checked
    directly: for every independent K, the set of elements that do not
    raise c(K) must itself not raise c(K); a failing pair (K, R) admits no
    intermediate independent set of rank c(R).
    """
    q, n, N = oracle.q, oracle.n, oracle.N
    t = oracle.as_array()
    pc = _popcounts(q)
    masks = np.arange(1 << q, dtype=np.int64)
    checks: list[AxiomCheck] = []

    def add(axiom: str, witness: str | None):
        checks.append(AxiomCheck(axiom, witness is None, witness))

    add("empty-set", None if t[0] == 0 else f"c({{}}) = {int(t[0])}")

    singleton_w = None
    for b in range(q):
        if t[1 << b] != 1:
            singleton_w = f"c{_set_str(1 << b)} = {int(t[1 << b])} != 1"
            break
    add("nonzero-singletons", singleton_w)

    mono_w = unit_w = None
    for b in range(q):
        bit = 1 << b
        sub = masks[(masks & bit) == 0]
        d = t[sub | bit] - t[sub]
        if mono_w is None:
            bad = np.nonzero(d < 0)[0]
            if bad.size:
                m = int(sub[bad[0]])
                mono_w = f"c{_set_str(m | bit)} < c{_set_str(m)}"
        if unit_w is None:
            bad = np.nonzero(d > 1)[0]
            if bad.size:
                m = int(sub[bad[0]])
                unit_w = f"c{_set_str(m | bit)} - c{_set_str(m)} = {int(d[bad[0]])}"
    add("monotone", mono_w)
    add("unit-increment", unit_w)

    bad = np.nonzero(t > np.minimum(pc, n + 1))[0]
    capped_w = None
    if bad.size:
        m = int(bad[0])
        capped_w = f"c{_set_str(m)} = {int(t[m])} > min({int(pc[m])},{n + 1})"
    add("capped", capped_w)

    big = np.nonzero((pc >= N + 1) & (t != n + 1))[0]
    span_w = None
    if big.size:
        m = int(big[0])
        span_w = f"c{_set_str(m)} = {int(t[m])} != {n + 1} with #S = {int(pc[m])} >= N+1"
    add("spanning", span_w)

    def submodular_witness() -> str | None:
        for b1 in range(q):
            for b2 in range(b1 + 1, q):
                bits = (1 << b1) | (1 << b2)
                base = masks[(masks & bits) == 0]
                lhs = t[base | bits] + t[base]
                rhs = t[base | (1 << b1)] + t[base | (1 << b2)]
                bad = np.nonzero(lhs > rhs)[0]
                if bad.size:
                    m = int(base[bad[0]])
                    return f"R1={_set_str(m | (1 << b1))}, R2={_set_str(m | (1 << b2))}"
        return None

    add("submodular", submodular_witness())

    exch_w = None
    for m in np.nonzero(t == pc)[0]:
        m = int(m)
        cm = int(t[m])
        cl = m
        for b in range(q):
            bit = 1 << b
            if not m & bit and t[m | bit] == cm:
                cl |= bit
        if int(t[cl]) != cm:
            exch_w = f"K={_set_str(m)}, R={_set_str(cl)}"
            break
    add("exchange", exch_w)

    return ValidationReport(all(c.ok for c in checks), tuple(checks))


def rho(oracle: RankOracle, r1: Iterable[int], r2: Iterable[int]) -> Fraction:
    """Increment ratio (c(R2) - c(R1)) / (#R2 - #R1), for R1 a proper subset of R2."""
    m1 = mask_of(r1, oracle.q)
    m2 = mask_of(r2, oracle.q)
    if m1 == m2 or m1 & ~m2:
        raise ValueError("R1 must be a proper subset of R2")
    return Fraction(oracle.c_mask(m2) - oracle.c_mask(m1),
                    m2.bit_count() - m1.bit_count())


@dataclass(frozen=True)
class Filtration:
    """Strictly increasing chain R_1 c ... c R_s with increasing ratios.

    The empty set R_0 is implicit.  `theta` is the terminal threshold ratio
    (n+1-c(R_s)) / (2N-n+1-#R_s).
    """

    subsets: tuple[tuple[int, ...], ...]
    ratios: tuple[Fraction, ...]
    theta: Fraction

    @property
    def s(self) -> int:
        return len(self.subsets)

    def as_dict(self) -> dict:
        return {
            "subsets": [list(r) for r in self.subsets],
            "ratios": [str(r) for r in self.ratios],
            "theta": str(self.theta),
        }


def build_filtration(oracle: RankOracle, *, validate: bool = True) -> Filtration:
    """Run the minimal-ratio chain construction.

    At each step the candidate pool consists of proper supersets R of the
    current end R_s with c(R_s) < c(R) < n+1 whose ratio to R_s stays below
    the terminal threshold; the next link minimizes the ratio, ties broken
    by maximal cardinality and then by lexicographically smallest sorted
    index tuple.  The returned chain is re-checked exhaustively against the
    four chain conditions before being returned.
    """
    q, n, N = oracle.q, oracle.n, oracle.N
    if validate:
        report = validate_rank_oracle(oracle)
        if not report.ok:
            raise VerificationError(f"oracle fails validation: {report.summary()}")
    if q < 2 * N - n + 1:
        raise ValueError(f"need q >= 2N-n+1 = {2 * N - n + 1}, got q = {q}")

    t = oracle.as_array()
    pc = _popcounts(q)
    masks = np.arange(1 << q, dtype=np.int64)

    chain = [0]
    ratios: list[Fraction] = []
    while True:
        rs = chain[-1]
        cs = int(t[rs])
        ps = int(pc[rs])
        tnum = n + 1 - cs
        tden = 2 * N - n + 1 - ps
        sup = (masks & rs) == rs
        cand = sup & (t > cs) & (t < n + 1)
        cand &= (t - cs) * tden < tnum * (pc - ps)
        pool = np.nonzero(cand)[0]
        if pool.size == 0:
            break
        best = None
        best_num = best_den = best_pc = 0
        for m in pool:
            m = int(m)
            num = int(t[m]) - cs
            den = int(pc[m]) - ps
            if best is None or num * best_den < best_num * den:
                take = True
            elif num * best_den == best_num * den:
                if int(pc[m]) != best_pc:
                    take = int(pc[m]) > best_pc
                else:
                    take = indices_of(m) < indices_of(best)
            else:
                take = False
            if take:
                best, best_num, best_den, best_pc = m, num, den, int(pc[m])
        chain.append(best)
        ratios.append(Fraction(best_num, best_den))

    last = chain[-1]
    theta = Fraction(n + 1 - int(t[last]), 2 * N - n + 1 - int(pc[last]))
    filtration = Filtration(tuple(indices_of(m) for m in chain[1:]), tuple(ratios), theta)
    _verify_filtration(oracle, chain, ratios, theta)
    return filtration


def _verify_filtration(oracle: RankOracle, chain: list[int],
                       ratios: list[Fraction], theta: Fraction) -> None:
    """Exhaustive post-check of the four chain conditions."""
    q, n, N = oracle.q, oracle.n, oracle.N
    t = oracle.as_array()
    pc = _popcounts(q)
    masks = np.arange(1 << q, dtype=np.int64)
    s = len(chain) - 1

    if int(t[chain[-1]]) >= n + 1:
        raise VerificationError("chain ends at a spanning subset")
    seq = [Fraction(0)] + list(ratios)
    for a, b in zip(seq, seq[1:]):
        if not a < b:
            raise VerificationError("chain ratios not strictly increasing")
    if s and not ratios[-1] < theta:
        raise VerificationError("last ratio not below theta")

    for i in range(1, s + 1):
        prev, cur = chain[i - 1], chain[i]
        cp, pp = int(t[prev]), int(pc[prev])
        num_i = int(t[cur]) - cp
        den_i = int(pc[cur]) - pp
        scope = ((masks & prev) == prev) & (masks != prev) & (t > cp) & (t < n + 1)
        num = t - cp
        den = pc - pp
        if np.any(scope & (num_i * den > num * den_i)):
            raise VerificationError(f"chain link {i} is not ratio-minimal")
        if np.any(scope & (num_i * den == num * den_i) & (pc > int(pc[cur]))):
            raise VerificationError(f"chain link {i} is not cardinality-maximal among ties")

    rs = chain[-1]
    cs, ps = int(t[rs]), int(pc[rs])
    scope = ((masks & rs) == rs) & (masks != rs) & (t > cs) & (t < n + 1)
    num = t - cs
    den = pc - ps
    if np.any(scope & (num * theta.denominator < theta.numerator * den)):
        raise VerificationError("a candidate below theta survives past the chain end")


@dataclass(frozen=True)
class WeightAssignment:
    """Exact rational weights omega(1..q) with constant theta and their chain."""

    omega: tuple[Fraction, ...]
    theta: Fraction
    filtration: Filtration

    def as_dict(self) -> dict:
        return {
            "omega": [str(w) for w in self.omega],
            "theta": str(self.theta),
            "filtration": self.filtration.as_dict(),
        }


def nochka_weights(oracle: RankOracle, *, validate: bool = True) -> WeightAssignment:
    """Derive weights from the filtration: the i-th ratio on R_i \\ R_{i-1}, theta elsewhere.

    The result is verified against all four weight conditions before being
    returned; the completion step of the existence proof is never
    materialized, so the weights depend on the chain and theta alone.
    """
    filtration = build_filtration(oracle, validate=validate)
    omega = [filtration.theta] * oracle.q
    prev: set[int] = set()
    for subset, ratio in zip(filtration.subsets, filtration.ratios):
        for j in subset:
            if j not in prev:
                omega[j - 1] = ratio
        prev = set(subset)
    weights = WeightAssignment(tuple(omega), filtration.theta, filtration)
    report = verify_weight_conditions(oracle, weights)
    if not report.ok:
        raise VerificationError(f"constructed weights fail verification: {report.summary()}")
    return weights


def verify_weight_conditions(oracle: RankOracle, weights: WeightAssignment) -> ValidationReport:
    """Check the four weight conditions, (iv) exhaustively over all R with #R <= N+1."""
    q, n, N = oracle.q, oracle.n, oracle.N
    omega, theta = weights.omega, weights.theta
    if len(omega) != q:
        raise ValueError(f"expected {q} weights, got {len(omega)}")
    checks: list[AxiomCheck] = []

    w = None
    if not theta <= 1:
        w = f"theta = {theta} > 1"
    else:
        for j, wj in enumerate(omega, 1):
            if not 0 < wj <= theta:
                w = f"omega({j}) = {wj} outside (0, {theta}]"
                break
    checks.append(AxiomCheck("bounds", w is None, w))

    total = sum(omega, Fraction(0))
    expected = theta * (q - 2 * N + n - 1) + n + 1
    w = None if total == expected else f"sum = {total} != {expected}"
    checks.append(AxiomCheck("sum-identity", w is None, w))

    low = Fraction(n + 1, 2 * N - n + 1)
    high = Fraction(n + 1, N + 1)
    w = None if low <= theta <= high else f"theta = {theta} outside [{low}, {high}]"
    checks.append(AxiomCheck("theta-range", w is None, w))

    denom = lcm(*(x.denominator for x in omega)) if omega else 1
    w_int = [int(x * denom) for x in omega]
    size = 1 << q
    sums = [0] * size
    table = oracle.table
    w = None
    for mask in range(1, size):
        low_bit = mask & -mask
        sums[mask] = sums[mask ^ low_bit] + w_int[low_bit.bit_length() - 1]
        if w is None and mask.bit_count() <= N + 1 and sums[mask] > table[mask] * denom:
            w = (f"R={_set_str(mask)}: sum = {Fraction(sums[mask], denom)}"
                 f" > c(R) = {table[mask]}")
    checks.append(AxiomCheck("subset-cap", w is None, w))

    return ValidationReport(all(c.ok for c in checks), tuple(checks))


def greedy_select(oracle: RankOracle, weights: WeightAssignment,
                  subset: Iterable[int], costs: Sequence) -> tuple[int, ...]:
    """Pick an ordered general-position subfamily of R dominating the weighted cost sum.

    Scans R by descending cost (ties by ascending index); after choosing
    j_1..j_i the elements of R not raising the rank are frozen and the next
    pick is the best remaining one.  Returns (j_1, ..., j_{c(R)}); both
    postconditions -- full rank of the selection and
    sum_{j in R} omega(j) E_j <= sum_i E_{j_i} -- are verified exactly.
    """
    q = oracle.q
    members = tuple(sorted(set(int(j) for j in subset)))
    if not members:
        raise ValueError("R must be nonempty")
    if len(members) > oracle.N + 1:
        raise ValueError(f"#R = {len(members)} exceeds N+1 = {oracle.N + 1}")
    rmask = mask_of(members, q)
    costs = [Fraction(x) for x in costs]
    if len(costs) != q:
        raise ValueError(f"cost vector must have length q = {q}")
    if any(e < 0 for e in costs):
        raise ValueError("costs must be nonnegative")

    order = sorted(members, key=lambda j: (-costs[j - 1], j))
    cstar = oracle.c_mask(rmask)
    chosen: list[int] = []
    chosen_mask = 0
    frozen = 0
    for level in range(1, cstar + 1):
        pick = next((j for j in order if not frozen >> (j - 1) & 1), None)
        if pick is None:
            raise VerificationError("selection exhausted R before reaching c(R)")
        chosen.append(pick)
        chosen_mask |= 1 << (pick - 1)
        frozen = 0
        for k in members:
            if oracle.c_mask(chosen_mask | 1 << (k - 1)) == level:
                frozen |= 1 << (k - 1)

    if oracle.c_mask(chosen_mask) != cstar:
        raise VerificationError("selected family does not reach the rank of R")
    lhs = sum((weights.omega[j - 1] * costs[j - 1] for j in members), Fraction(0))
    rhs = sum((costs[j - 1] for j in chosen), Fraction(0))
    if lhs > rhs:
        raise VerificationError(f"greedy inequality fails: {lhs} > {rhs}")
    return tuple(chosen)


def _primitive(vec: list[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, abs(x))
    if g > 1:
        vec = [x // g for x in vec]
    for x in vec:
        if x:
            if x < 0:
                vec = [-y for y in vec]
            break
    return tuple(vec)


def _echelon_insert_int(rows: tuple[tuple[int, ...], ...],
                        vec: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    v = list(vec)
    for row in rows:
        p = next(i for i, x in enumerate(row) if x)
        if v[p]:
            rp, vp = row[p], v[p]
            v = [x * rp - y * vp for x, y in zip(v, row)]
    if not any(v):
        return rows
    new = _primitive(v)
    pivot = next(i for i, x in enumerate(new) if x)
    out = list(rows)
    at = sum(1 for row in out if next(i for i, x in enumerate(row) if x) < pivot)
    out.insert(at, new)
    return tuple(out)


def linear_matroid_oracle(vectors: Sequence[Sequence], N: int) -> RankOracle:
    """Rank oracle of a list of q nonzero rational vectors: c(R) = rank{v_j : j in R}.

    Ranks are computed over the rationals via integer echelon forms shared
    along the subset lattice.  The result may fail validation (spanning in
    particular); callers must validate.
    """
    q = len(vectors)
    if not 1 <= q <= MAX_GROUND_SET:
        raise ValueError(f"need 1..{MAX_GROUND_SET} vectors, got {q}")
    dim = len(vectors[0])
    n = dim - 1
    if n < 1:
        raise ValueError("vectors must have length n+1 >= 2")
    if N < n:
        raise ValueError(f"N must be >= n = {n}")

    ints: list[tuple[int, ...]] = []
    for j, vec in enumerate(vectors, 1):
        if len(vec) != dim:
            raise ValueError(f"vector {j} has length {len(vec)} != {dim}")
        fracs = [Fraction(x) for x in vec]
        if all(x == 0 for x in fracs):
            raise ValueError(f"vector {j} is zero")
        den = lcm(*(x.denominator for x in fracs))
        ints.append(_primitive([int(x * den) for x in fracs]))

    bases: list[tuple[tuple[int, ...], ...]] = [()] * (1 << q)
    table = [0] * (1 << q)
    for mask in range(1, 1 << q):
        low = mask & -mask
        bases[mask] = _echelon_insert_int(bases[mask ^ low], ints[low.bit_length() - 1])
        table[mask] = len(bases[mask])
    return RankOracle(q, n, N, tuple(table))


def format_oracle(oracle: RankOracle) -> str:
    """Interchange text: header `q n N`, then one `subset : c` line per subset."""
    lines = [f"{oracle.q} {oracle.n} {oracle.N}"]
    for mask in range(1 << oracle.q):
        subset = "-" if mask == 0 else ",".join(map(str, indices_of(mask)))
        lines.append(f"{subset} : {oracle.table[mask]}")
    return "\n".join(lines) + "\n"


def parse_oracle(text: str) -> RankOracle:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty oracle file")
    header = lines[0].split()
    if len(header) != 3:
        raise ParseError("header must be `q n N`", line=1)
    try:
        q, n, N = (int(x) for x in header)
    except ValueError:
        raise ParseError("header must hold three integers", line=1) from None
    if not 1 <= q <= MAX_GROUND_SET:
        raise ParseError(f"q out of range 1..{MAX_GROUND_SET}", line=1)
    table: list[int | None] = [None] * (1 << q)
    count = 0
    for ln, raw in enumerate(lines[1:], 2):
        stripped = raw.strip()
        if not stripped:
            continue
        if ":" not in stripped:
            raise ParseError("expected `subset : c-value`", line=ln)
        left, _, right = stripped.partition(":")
        left = left.strip()
        try:
            mask = 0 if left == "-" else mask_of((int(p) for p in left.split(",")), q)
        except ValueError as exc:
            raise ParseError(str(exc), line=ln) from None
        try:
            value = int(right.strip())
        except ValueError:
            raise ParseError(f"bad c-value {right.strip()!r}", line=ln) from None
        if table[mask] is not None:
            raise ParseError(f"duplicate subset {left}", line=ln)
        table[mask] = value
        count += 1
    if count != 1 << q:
        raise ParseError(f"expected {1 << q} subset lines, got {count}")
    try:
        return RankOracle(q, n, N, tuple(table))  # type: ignore[arg-type]
    except ValueError as exc:
        raise ParseError(str(exc)) from None
