"""Classical message strategies: Fourier analysis over Z_2^n, the
parity-obliviousness criterion, the canonical mixture decomposition, and a
brute-force linear-programming oracle for the optimal classical success.

An encoding is the stochastic table p(message | input).  Its Fourier
coefficients against the characters chi_r(x) = (-1)^(x.r) vanish on every
mask of weight >= 2 exactly when the encoding is parity-oblivious, in which
case it decomposes into a mixture of "send an input-independent message" and
"send a message determined by one input bit".
"""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .bits import bit, bit_table, check_n, format_bits, parity, parity_masks, parse_bits
from .errors import (
    InvalidArgument,
    InvalidDecoder,
    InvalidEncoding,
    NotParityOblivious,
    OracleTooLarge,
    PomlabError,
)
from .parallel import parallel_map

ROW_ATOL = 1e-12
PO_TOL = 1e-9
DECOMPOSE_ATOL = 1e-10
ORACLE_MAX_N = 3
ORACLE_MAX_ALPHABET = 8
_EXHAUSTIVE_DECODER_BITS = 12


@dataclass(frozen=True)
class ClassicalEncoding:
    n: int
    alphabet: int
    table: np.ndarray  # (2**n, alphabet) stochastic rows

    def __post_init__(self):
        n = check_n(self.n)
        if not isinstance(self.alphabet, (int, np.integer)) or self.alphabet < 1:
            raise InvalidEncoding(f"alphabet size must be positive, got {self.alphabet!r}")
        table = np.asarray(self.table, dtype=float)
        if table.shape != (2**n, self.alphabet):
            raise InvalidEncoding(
                f"table shape {table.shape} does not match ({2**n}, {self.alphabet})"
            )
        if not np.all(np.isfinite(table)):
            raise InvalidEncoding("table has non-finite entries")
        if np.any(table < -ROW_ATOL) or np.any(table > 1.0 + ROW_ATOL):
            raise InvalidEncoding("table entries outside [0, 1]")
        rows = table.sum(axis=1)
        worst = np.max(np.abs(rows - 1.0))
        if worst > ROW_ATOL:
            raise InvalidEncoding(f"rows must sum to 1, worst deviation {worst:g}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "alphabet", int(self.alphabet))
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class FourierTable:
    n: int
    alphabet: int
    coefficients: np.ndarray  # (2**n, alphabet), row r holds the chi_r coefficients


@dataclass(frozen=True)
class Decoder:
    n: int
    alphabet: int
    table: np.ndarray  # (alphabet, n) answer bit per (message, question)

    def __post_init__(self):
        n = check_n(self.n)
        table = np.asarray(self.table, dtype=np.int64)
        if table.shape != (self.alphabet, n):
            raise InvalidDecoder(
                f"decoder shape {table.shape} does not match ({self.alphabet}, {n})"
            )
        if not np.all((table == 0) | (table == 1)):
            raise InvalidDecoder("decoder entries must be bits")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "alphabet", int(self.alphabet))
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class CanonicalDecomposition:
    """Mixture form of a parity-oblivious encoding.

    weights[0] is the probability of sending an input-independent message
    drawn from base; weights[i] (i >= 1) is the probability of sending a
    message drawn from conditionals[i-1, b] when input bit i has value b.
    The raw_* fields are the unnormalized coefficients recovered from the
    signed Fourier data; signs[m] is the bit pattern marking which Fourier
    coefficients of message m were nonnegative.  Branches listed in unused
    carry zero weight and uniform placeholder distributions.
    """

    n: int
    alphabet: int
    weights: np.ndarray  # (n+1,)
    base: np.ndarray  # (alphabet,)
    conditionals: np.ndarray  # (n, 2, alphabet)
    signs: np.ndarray  # (alphabet,) masks
    raw_base: np.ndarray  # (alphabet,)
    raw_conditionals: np.ndarray  # (n, 2, alphabet)
    base_marginal: float
    conditional_marginals: np.ndarray  # (n, 2)
    unused: frozenset[int]

    def reassemble(self) -> np.ndarray:
        """Rebuild the encoding table from the normalized mixture."""
        table = np.tile(self.weights[0] * self.base, (2**self.n, 1))
        bits = bit_table(self.n)
        for i in range(1, self.n + 1):
            table += self.weights[i] * self.conditionals[i - 1, bits[:, i - 1]]
        return table


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along axis 0 (length a power of 2)."""
    out = np.array(values, dtype=float)
    size = out.shape[0]
    if size & (size - 1):
        raise InvalidArgument(f"transform length must be a power of 2, got {size}")
    h = 1
    while h < size:
        for start in range(0, size, 2 * h):
            upper = out[start : start + h].copy()
            lower = out[start + h : start + 2 * h]
            out[start : start + h] = upper + lower
            out[start + h : start + 2 * h] = upper - lower
        h *= 2
    return out


def character_matrix(n: int) -> np.ndarray:
    """(2**n, 2**n) matrix of chi_r(x) = (-1)^(x.r); kept small for test use."""
    check_n(n)
    if n > 10:
        raise InvalidArgument("character matrix is materialized only for n <= 10")
    xs = np.arange(2**n)
    overlap = np.bitwise_and(xs[:, None], xs[None, :])
    popcount = np.array([[int(v).bit_count() for v in row] for row in overlap])
    return 1.0 - 2.0 * (popcount & 1)


def fourier_transform(e: ClassicalEncoding) -> FourierTable:
    """Coefficients (1/2**n) sum_x chi_r(x) p(m | x) for every mask r."""
    coeffs = fwht(e.table) / 2**e.n
    return FourierTable(e.n, e.alphabet, coeffs)


def reconstruct(ft: FourierTable) -> np.ndarray:
    """Invert fourier_transform: p(m | x) = sum_r coeff[r, m] chi_r(x)."""
    return fwht(ft.coefficients)


def is_parity_oblivious(e: ClassicalEncoding, tol: float = PO_TOL) -> tuple[bool, float]:
    """Whether every weight >= 2 Fourier coefficient vanishes, plus the worst one."""
    coeffs = fourier_transform(e).coefficients
    masks = parity_masks(e.n)
    if not masks:
        return True, 0.0
    violation = float(np.max(np.abs(coeffs[masks])))
    return violation <= tol, violation


def decompose(e: ClassicalEncoding) -> CanonicalDecomposition:
    """Split a parity-oblivious encoding into its canonical mixture form.

    The weight-1 Fourier coefficients are folded into nonnegative per-bit
    coefficients according to their signs; the input-independent part is read
    off the table at the sign pattern itself, where every per-bit term
    vanishes.  Rejects encodings whose residual parity leakage prevents the
    mixture from reproducing the table to within 1e-10.
    """
    ok, violation = is_parity_oblivious(e)
    if not ok:
        raise NotParityOblivious(
            f"encoding leaks parity information (worst coefficient {violation:g})"
        )
    n, m_count = e.n, e.alphabet
    coeffs = fourier_transform(e).coefficients
    per_bit = np.stack([coeffs[1 << (i - 1)] for i in range(1, n + 1)])  # (n, M)
    nonneg = per_bit >= 0.0
    raw_cond = np.zeros((n, 2, m_count))
    raw_cond[:, 0, :] = np.where(nonneg, 2.0 * per_bit, 0.0)
    raw_cond[:, 1, :] = np.where(nonneg, 0.0, -2.0 * per_bit)
    signs = np.zeros(m_count, dtype=np.int64)
    for i in range(1, n + 1):
        signs |= nonneg[i - 1].astype(np.int64) << (i - 1)
    raw_base = e.table[signs, np.arange(m_count)]
    if np.any(raw_base < -DECOMPOSE_ATOL):
        raise NotParityOblivious(
            f"input-independent part dips to {raw_base.min():g}; no mixture form exists"
        )
    raw_base = np.maximum(raw_base, 0.0)
    base_marginal = float(raw_base.sum())
    cond_marginals = raw_cond.sum(axis=2)  # (n, 2)
    if np.max(np.abs(cond_marginals[:, 0] - cond_marginals[:, 1])) > DECOMPOSE_ATOL:
        raise PomlabError(
            "internal inconsistency: per-bit marginals disagree beyond tolerance"
        )
    weights = np.empty(n + 1)
    weights[0] = base_marginal
    weights[1:] = 0.5 * (cond_marginals[:, 0] + cond_marginals[:, 1])
    unused = set()
    base = np.full(m_count, 1.0 / m_count)
    if weights[0] > DECOMPOSE_ATOL:
        base = raw_base / weights[0]
    else:
        unused.add(0)
    conditionals = np.empty((n, 2, m_count))
    for i in range(1, n + 1):
        if weights[i] > DECOMPOSE_ATOL:
            conditionals[i - 1] = raw_cond[i - 1] / weights[i]
        else:
            conditionals[i - 1] = 1.0 / m_count
            unused.add(i)
    result = CanonicalDecomposition(
        n=n,
        alphabet=m_count,
        weights=weights,
        base=base,
        conditionals=conditionals,
        signs=signs,
        raw_base=raw_base,
        raw_conditionals=raw_cond,
        base_marginal=base_marginal,
        conditional_marginals=cond_marginals,
        unused=frozenset(unused),
    )
    residual = np.max(np.abs(result.reassemble() - e.table))
    if residual > DECOMPOSE_ATOL:
        raise NotParityOblivious(
            f"mixture form misses the table by {residual:g}; "
            "residual parity leakage is too large"
        )
    return result


def classical_success(e: ClassicalEncoding, d: Decoder) -> float:
    """Probability that the decoded bit matches the asked input bit."""
    if d.alphabet != e.alphabet or d.n != e.n:
        raise InvalidDecoder(
            f"decoder shape ({d.alphabet}, {d.n}) does not match encoding "
            f"({e.alphabet}, {e.n})"
        )
    bits = bit_table(e.n)  # (2**n, n)
    correct = d.table[None, :, :] == bits[:, None, :]  # (2**n, M, n)
    return float(np.einsum("xm,xmy->", e.table, correct.astype(float)) / (2**e.n * e.n))


def optimal_decoder(e: ClassicalEncoding) -> Decoder:
    """Maximum-likelihood answers: the bit value whose inputs give the message
    more total weight, ties toward 0."""
    bits = bit_table(e.n)
    table = np.empty((e.alphabet, e.n), dtype=np.int64)
    for y in range(e.n):
        weight0 = e.table[bits[:, y] == 0].sum(axis=0)
        weight1 = e.table[bits[:, y] == 1].sum(axis=0)
        table[:, y] = (weight1 > weight0).astype(np.int64)
    return Decoder(e.n, e.alphabet, table)


def _parity_constraints(n: int, m_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Equality system: stochastic rows plus vanishing parity differences."""
    size = 2**n * m_count
    rows = []
    for x in range(2**n):
        row = np.zeros(size)
        row[x * m_count : (x + 1) * m_count] = 1.0
        rows.append(row)
    for mask in parity_masks(n):
        for m in range(m_count):
            row = np.zeros(size)
            for x in range(2**n):
                row[x * m_count + m] = 1.0 - 2.0 * parity(x, mask)
            rows.append(row)
    rhs = np.zeros(len(rows))
    rhs[: 2**n] = 1.0
    return np.array(rows), rhs


def _best_encoding_value(decoder_bits: np.ndarray, n: int, m_count: int, a_eq, b_eq) -> float:
    """LP over parity-oblivious encodings for one fixed decoder table."""
    objective = np.zeros(2**n * m_count)
    for x in range(2**n):
        for m in range(m_count):
            hits = sum(1 for y in range(n) if decoder_bits[m, y] == bit(x, y + 1))
            objective[x * m_count + m] = hits
    objective /= 2**n * n
    res = linprog(-objective, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise PomlabError(f"oracle linear program failed with status {res.status}")
    return float(-res.fun)


def brute_force_optimum(n: int, alphabet: int) -> float:
    """Independent oracle for the optimal parity-oblivious classical success.

    For every decoder, the best compatible encoding solves a linear program
    over the parity-oblivious polytope; the oracle returns the maximum over
    decoders.  Small problems enumerate all 2**(alphabet*n) decoder tables;
    larger ones use that messages decoded identically for every question can
    be merged, so only decoders assigning distinct answer patterns matter.
    """
    check_n(n)
    if not isinstance(alphabet, (int, np.integer)) or alphabet < 1:
        raise InvalidArgument(f"alphabet size must be positive, got {alphabet!r}")
    if n > ORACLE_MAX_N or alphabet > ORACLE_MAX_ALPHABET:
        raise OracleTooLarge(
            f"oracle caps are n <= {ORACLE_MAX_N} and alphabet <= {ORACLE_MAX_ALPHABET}"
        )
    m_count = int(alphabet)
    a_eq, b_eq = _parity_constraints(n, m_count)

    def decoder_tables():
        if m_count * n <= _EXHAUSTIVE_DECODER_BITS:
            for code in range(2 ** (m_count * n)):
                yield np.array(
                    [[(code >> (m * n + y)) & 1 for y in range(n)] for m in range(m_count)],
                    dtype=np.int64,
                )
        else:
            patterns = min(m_count, 2**n)
            for chosen in itertools.combinations(range(2**n), patterns):
                table = np.zeros((m_count, n), dtype=np.int64)
                for m, pattern in enumerate(chosen):
                    for y in range(n):
                        table[m, y] = bit(pattern, y + 1)
                yield table

    values = parallel_map(
        lambda dec: _best_encoding_value(dec, n, m_count, a_eq, b_eq),
        decoder_tables(),
    )
    return max(values)


def constant_encoding(n: int, alphabet: int) -> ClassicalEncoding:
    """Send a uniform message regardless of the input."""
    table = np.full((2**n, alphabet), 1.0 / alphabet)
    return ClassicalEncoding(n, alphabet, table)


def single_bit_encoding(n: int, i: int, alphabet: int = 2) -> ClassicalEncoding:
    """Deterministically send the value of input bit i as the message."""
    check_n(n)
    if not 1 <= i <= n:
        raise InvalidArgument(f"bit index {i!r} outside 1..{n}")
    if alphabet < 2:
        raise InvalidArgument("single-bit encoding needs at least two messages")
    table = np.zeros((2**n, alphabet))
    for x in range(2**n):
        table[x, bit(x, i)] = 1.0
    return ClassicalEncoding(n, alphabet, table)


def random_parity_oblivious_encoding(n: int, alphabet: int, rng) -> ClassicalEncoding:
    """Sample the canonical mixture form, which is parity-oblivious by construction."""
    check_n(n)
    weights = rng.dirichlet(np.ones(n + 1))
    base = rng.dirichlet(np.ones(alphabet))
    table = np.tile(weights[0] * base, (2**n, 1))
    bits = bit_table(n)
    for i in range(1, n + 1):
        cond = rng.dirichlet(np.ones(alphabet), size=2)
        table += weights[i] * cond[bits[:, i - 1]]
    return ClassicalEncoding(n, alphabet, table)


def random_encoding(n: int, alphabet: int, rng) -> ClassicalEncoding:
    """Sample unconstrained stochastic rows (generically not parity-oblivious)."""
    check_n(n)
    table = rng.dirichlet(np.ones(alphabet), size=2**n)
    return ClassicalEncoding(n, alphabet, table)


def encoding_to_dict(e: ClassicalEncoding) -> dict:
    return {
        "n": e.n,
        "alphabet": e.alphabet,
        "rows": [
            {"x": format_bits(x, e.n), "probs": [float(v) for v in e.table[x]]}
            for x in range(2**e.n)
        ],
    }


def encoding_from_dict(data: dict) -> ClassicalEncoding:
    try:
        n = int(data["n"])
        alphabet = int(data["alphabet"])
        rows = data["rows"]
    except (KeyError, TypeError) as exc:
        raise InvalidEncoding(f"missing encoding field: {exc}") from exc
    check_n(n)
    table = np.full((2**n, alphabet), np.nan)
    for entry in rows:
        x, width = parse_bits(entry["x"])
        if width != n:
            raise InvalidEncoding(f"input {entry['x']!r} does not have {n} bits")
        table[x] = np.asarray(entry["probs"], dtype=float)
    if np.isnan(table).any():
        raise InvalidEncoding("encoding rows are incomplete")
    return ClassicalEncoding(n, alphabet, table)
