"""Finite hidden-variable models over the multiplexing scenario.

A model assigns each preparation a distribution over hidden states and each
hidden state a response probability per question.  The checkers here verify
the two noncontextuality conditions (equivalent preparations or measurements
get equivalent representations), the hidden-level parity condition, and the
ceiling on success when the receiver is handed the hidden state itself.
"""

from dataclasses import dataclass

import numpy as np

from .bits import bit_table, check_n, mask_sign_table, parity, parity_masks
from .errors import InvalidArgument, InvalidEquivalenceClaim, InvalidModel
from .classical import ClassicalEncoding, Decoder, random_parity_oblivious_encoding

ATOL = 1e-12
EQUIV_TOL = 1e-9


@dataclass(frozen=True)
class HiddenVariableModel:
    n: int
    prep_table: np.ndarray  # (2**n, L): p(lambda | preparation x)
    resp_table: np.ndarray  # (L, n): p(outcome 0 | lambda, question y)

    def __post_init__(self):
        n = check_n(self.n)
        prep = np.asarray(self.prep_table, dtype=float)
        resp = np.asarray(self.resp_table, dtype=float)
        if prep.ndim != 2 or prep.shape[0] != 2**n:
            raise InvalidModel(f"prep_table must have 2**{n} rows, got shape {prep.shape}")
        if resp.shape != (prep.shape[1], n):
            raise InvalidModel(
                f"resp_table shape {resp.shape} does not match ({prep.shape[1]}, {n})"
            )
        if not (np.all(np.isfinite(prep)) and np.all(np.isfinite(resp))):
            raise InvalidModel("model tables have non-finite entries")
        if np.any(prep < -ATOL):
            raise InvalidModel("prep_table has negative entries")
        rows = prep.sum(axis=1)
        worst = np.max(np.abs(rows - 1.0))
        if worst > ATOL:
            raise InvalidModel(f"prep_table rows must sum to 1, worst deviation {worst:g}")
        if np.any(resp < -ATOL) or np.any(resp > 1.0 + ATOL):
            raise InvalidModel("resp_table entries outside [0, 1]")
        prep.setflags(write=False)
        resp.setflags(write=False)
        object.__setattr__(self, "prep_table", prep)
        object.__setattr__(self, "resp_table", resp)
        object.__setattr__(self, "n", n)

    @property
    def lambda_count(self) -> int:
        return self.prep_table.shape[1]


def reproduce(h: HiddenVariableModel) -> np.ndarray:
    """Operational table p(outcome 0 | x, y) obtained by summing out lambda."""
    return h.prep_table @ h.resp_table


def table_success(outcome0: np.ndarray, n: int) -> float:
    """Success probability of an operational table under the answer convention."""
    asked = bit_table(n)
    correct = np.where(asked == 0, outcome0, 1.0 - outcome0)
    return float(correct.mean())


def check_preparation_nc(
    h: HiddenVariableModel,
    equiv_classes: list[tuple[np.ndarray, np.ndarray]],
) -> tuple[bool, float]:
    """Verify operationally identical preparation mixtures share a lambda distribution.

    Each class is a pair of weight vectors over inputs; the check compares the
    induced lambda distributions by total variation distance.
    """
    worst = 0.0
    for weights_a, weights_b in equiv_classes:
        wa = _check_weights(weights_a, h.n)
        wb = _check_weights(weights_b, h.n)
        dist_a = wa @ h.prep_table
        dist_b = wb @ h.prep_table
        deviation = 0.5 * float(np.sum(np.abs(dist_a - dist_b)))
        worst = max(worst, deviation)
    return worst <= EQUIV_TOL, worst


def _check_weights(weights, n: int) -> np.ndarray:
    vec = np.asarray(weights, dtype=float)
    if vec.shape != (2**n,) or np.any(vec < -ATOL) or abs(vec.sum() - 1.0) > EQUIV_TOL:
        raise InvalidArgument("mixture weights must be a distribution over inputs")
    return vec


def parity_equivalence_classes(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """The (mask, 0) versus (mask, 1) uniform mixtures for every parity mask."""
    classes = []
    for mask in parity_masks(n):
        w0 = np.zeros(2**n)
        w1 = np.zeros(2**n)
        for x in range(2**n):
            if parity(x, mask) == 0:
                w0[x] = 1.0
            else:
                w1[x] = 1.0
        classes.append((w0 / w0.sum(), w1 / w1.sum()))
    return classes


def check_measurement_nc(h: HiddenVariableModel, equiv_pairs: list[tuple[int, int]]) -> bool:
    """Verify operationally identical measurements share a response column.

    Pairs are 1-based question indices; a pair whose operational statistics
    differ is rejected as an invalid equivalence claim.
    """
    operational = reproduce(h)
    for y_a, y_b in equiv_pairs:
        if not (1 <= y_a <= h.n and 1 <= y_b <= h.n):
            raise InvalidArgument(f"question indices ({y_a}, {y_b}) outside 1..{h.n}")
        gap = float(np.max(np.abs(operational[:, y_a - 1] - operational[:, y_b - 1])))
        if gap > EQUIV_TOL:
            raise InvalidEquivalenceClaim(
                f"measurements {y_a} and {y_b} differ operationally by {gap:g}"
            )
    for y_a, y_b in equiv_pairs:
        gap = float(np.max(np.abs(h.resp_table[:, y_a - 1] - h.resp_table[:, y_b - 1])))
        if gap > EQUIV_TOL:
            return False
    return True


def hv_parity_condition(h: HiddenVariableModel) -> tuple[bool, float]:
    """Whether knowing lambda reveals nothing about any multi-bit parity.

    With a uniform prior over inputs, the posterior over inputs given lambda
    must weight opposite parities equally for every mask.  Hidden states with
    zero total weight are skipped; their posteriors are undefined.
    """
    masks = parity_masks(h.n)
    if not masks:
        return True, 0.0
    totals = h.prep_table.sum(axis=0)
    signs = mask_sign_table(h.n, masks)  # (num_masks, 2**n)
    imbalance = signs @ h.prep_table  # (num_masks, L)
    worst = 0.0
    for lam in range(h.lambda_count):
        if totals[lam] <= 0.0:
            continue
        worst = max(worst, float(np.max(np.abs(imbalance[:, lam])) / totals[lam]))
    return worst <= EQUIV_TOL, worst


def hv_optimal_success(h: HiddenVariableModel) -> float:
    """Success ceiling when the receiver learns lambda exactly.

    For each question the receiver answers with the likelier bit value given
    lambda; this dominates every response table the model could use.
    """
    bits = bit_table(h.n)
    total = 0.0
    for y in range(h.n):
        side0 = h.prep_table[bits[:, y] == 0].sum(axis=0)
        side1 = h.prep_table[bits[:, y] == 1].sum(axis=0)
        total += float(np.maximum(side0, side1).sum())
    return total / (2**h.n * h.n)


def from_classical_strategy(e: ClassicalEncoding, d: Decoder) -> HiddenVariableModel:
    """Embed a classical strategy: the hidden state is the message itself."""
    if d.alphabet != e.alphabet or d.n != e.n:
        raise InvalidArgument("decoder does not match the encoding dimensions")
    resp = 1.0 - d.table.astype(float)
    return HiddenVariableModel(e.n, e.table, resp)


def full_revelation_model(n: int) -> HiddenVariableModel:
    """The hidden state is the entire input; answers are read off directly."""
    check_n(n)
    prep = np.eye(2**n)
    resp = 1.0 - bit_table(n).astype(float)
    return HiddenVariableModel(n, prep, resp)


def random_parity_oblivious_model(n: int, rng, components: int = 2) -> HiddenVariableModel:
    """Sample models satisfying the hidden-level parity condition by construction.

    Draws canonical-form parity-oblivious encodings, relabels their hidden
    states, and mixes them as a convex combination along the lambda axis.
    Scaling and concatenating columns both preserve per-lambda posteriors, so
    the parity condition survives; rejection sampling would essentially never
    land on it.
    """
    if components < 1:
        raise InvalidArgument(f"components must be positive, got {components!r}")
    mix = rng.dirichlet(np.ones(components))
    blocks = []
    for j in range(components):
        alphabet = int(rng.integers(2, 7))
        enc = random_parity_oblivious_encoding(n, alphabet, rng)
        block = enc.table[:, rng.permutation(alphabet)]
        blocks.append(mix[j] * block)
    prep = np.concatenate(blocks, axis=1)
    resp = rng.uniform(0.0, 1.0, size=(prep.shape[1], n))
    return HiddenVariableModel(n, prep, resp)


def model_to_dict(h: HiddenVariableModel) -> dict:
    return {
        "n": h.n,
        "lambdas": h.lambda_count,
        "prep": [[float(v) for v in row] for row in h.prep_table],
        "resp": [[float(v) for v in row] for row in h.resp_table],
    }


def model_from_dict(data: dict) -> HiddenVariableModel:
    try:
        n = int(data["n"])
        prep = np.asarray(data["prep"], dtype=float)
        resp = np.asarray(data["resp"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidModel(f"missing or malformed model field: {exc}") from exc
    return HiddenVariableModel(n, prep, resp)
