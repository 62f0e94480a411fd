"""Truncated Fock-space operators for one mechanical and one or two optical modes.

Dense complex matrices throughout (desk-scale cutoffs; the total dimension is
capped).  Ladder truncation corrupts the top levels, so operator identities
are asserted on the "interior block" that excludes the top levels of each
subsystem; helpers for that projection live here.

Normalization: the dimensionless quadratures are Q = (a^dag + a)/sqrt(2),
P = i (a^dag - a)/sqrt(2) (same for the mechanical pair X, P_mech), fixed so
that [Q, P] = i and P^2 + Q^2 = 2 n + 1 hold on the interior block.  This is
the normalization under which the cubic interaction comes out as
-hbar alpha X (n + 1/2); a variant identity with coefficients quartered
circulates in print but is inconsistent with those interaction coefficients
and is not used.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import expm

__all__ = [
    "FockSpace",
    "OperatorMatrix",
    "OperatorWord",
    "ModeOperators",
    "destroy",
    "make_space",
    "mode_operators",
    "symmetrize",
    "symmetrize_matrices",
    "expand_inverse_power",
    "commutator",
    "spectrum",
    "bogoliubov_pair",
    "squared_annihilator",
    "displacement",
    "coherent_state",
    "interior_indices",
    "interior_block",
]

HERMITICITY_RTOL = 1e-10
EIG_RESIDUAL_RTOL = 1e-9
MAX_WORD_LENGTH = 8


@dataclass(frozen=True)
class FockSpace:
    """Mechanical (x) optical truncated product space, mechanical factor first."""

    n_mech: int
    n_opt: int
    n_modes_opt: int = 1
    dim_cap: int = 4096

    def __post_init__(self):
        if self.n_mech < 2 or self.n_opt < 2:
            raise ValueError("Fock cutoffs must be >= 2")
        if self.n_modes_opt < 1:
            raise ValueError("need at least one optical mode")
        if self.dim > self.dim_cap:
            raise ValueError(
                f"total dimension {self.dim} exceeds the cap {self.dim_cap}"
            )

    @property
    def dim(self) -> int:
        return self.n_mech * self.n_opt**self.n_modes_opt

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_mech,) + (self.n_opt,) * self.n_modes_opt


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex operator bound to its space."""

    space: FockSpace
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != (self.space.dim, self.space.dim):
            raise ValueError("matrix dimension does not match the space")

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.space, self.data.conj().T)

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.data - self.data.conj().T).max())

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.data, dtype=dtype)


def destroy(n: int) -> np.ndarray:
    """Annihilation operator on an n-level ladder: <m-1|a|m> = sqrt(m)."""
    return np.diag(np.sqrt(np.arange(1.0, n)), 1).astype(complex)


def _embed(op: np.ndarray, slot: int, space: FockSpace) -> np.ndarray:
    """Lift a single-factor operator into the product space at the given slot
    (slot 0 = mechanical, slots 1.. = optical modes)."""
    out = np.array([[1.0 + 0.0j]])
    for s, n in enumerate(space.shape):
        out = np.kron(out, op if s == slot else np.eye(n, dtype=complex))
    return out


@dataclass(frozen=True)
class ModeOperators:
    """Elementary operator bundle on one space.

    ``a``/``adag``/``n_op``/``q``/``p`` act on the first optical mode;
    ``a_modes``/``adag_modes`` list every optical mode.  ``b``/``bdag``/
    ``m_op``/``x``/``p_mech`` are mechanical.
    """

    space: FockSpace
    b: np.ndarray
    bdag: np.ndarray
    m_op: np.ndarray
    x: np.ndarray
    p_mech: np.ndarray
    a: np.ndarray
    adag: np.ndarray
    n_op: np.ndarray
    q: np.ndarray
    p: np.ndarray
    a_modes: tuple[np.ndarray, ...]
    adag_modes: tuple[np.ndarray, ...]

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.space.dim, dtype=complex)

    def wrap(self, data: np.ndarray) -> OperatorMatrix:
        return OperatorMatrix(self.space, data)


def mode_operators(space: FockSpace) -> ModeOperators:
    """Build the elementary ladder and quadrature matrices on a space."""
    b = _embed(destroy(space.n_mech), 0, space)
    bdag = b.conj().T
    a_modes = tuple(
        _embed(destroy(space.n_opt), 1 + i, space) for i in range(space.n_modes_opt)
    )
    adag_modes = tuple(m.conj().T for m in a_modes)
    a, adag = a_modes[0], adag_modes[0]
    s2 = np.sqrt(2.0)
    return ModeOperators(
        space=space,
        b=b,
        bdag=bdag,
        m_op=bdag @ b,
        x=(bdag + b) / s2,
        p_mech=1j * (bdag - b) / s2,
        a=a,
        adag=adag,
        n_op=adag @ a,
        q=(adag + a) / s2,
        p=1j * (adag - a) / s2,
        a_modes=a_modes,
        adag_modes=adag_modes,
    )


def make_space(
    n_mech: int, n_opt: int, n_modes_opt: int = 1, dim_cap: int = 4096
) -> tuple[FockSpace, ModeOperators]:
    space = FockSpace(n_mech=n_mech, n_opt=n_opt, n_modes_opt=n_modes_opt, dim_cap=dim_cap)
    return space, mode_operators(space)


def interior_indices(space: FockSpace, margin: int = 2) -> np.ndarray:
    """Basis indices whose every subsystem level is below cutoff - margin."""
    shape = space.shape
    keep = []
    for idx in range(space.dim):
        levels = np.unravel_index(idx, shape)
        if all(lv < n - margin for lv, n in zip(levels, shape)):
            keep.append(idx)
    return np.asarray(keep, dtype=int)


def interior_block(mat: np.ndarray | OperatorMatrix, space: FockSpace, margin: int = 2) -> np.ndarray:
    """Restrict a matrix to the interior block where truncation artifacts vanish."""
    data = np.asarray(mat)
    idx = interior_indices(space, margin)
    return data[np.ix_(idx, idx)]


@dataclass(frozen=True)
class OperatorWord:
    """Ordered product of named factors; repeated labels mean repeated factors."""

    labels: tuple[str, ...]
    alphabet: Mapping[str, np.ndarray | OperatorMatrix]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("word must be nonempty")
        missing = [lb for lb in self.labels if lb not in self.alphabet]
        if missing:
            raise KeyError(f"labels not in alphabet: {missing}")


def symmetrize_matrices(
    factors: Sequence[np.ndarray], labels: Sequence[object] | None = None
) -> np.ndarray:
    """Average the products of the factors over all distinct orderings.

    Repeated labels (default: object identity) collapse permutations that
    produce identical products, so a word with repetitions averages over its
    multiset orderings with the correct weighting; the result equals the
    naive average over all n! orderings.  Enumeration is guarded at length 8.
    """
    n = len(factors)
    if n == 0:
        raise ValueError("word must be nonempty")
    if n > MAX_WORD_LENGTH:
        raise ValueError(f"word length {n} exceeds the n! enumeration guard ({MAX_WORD_LENGTH})")
    if labels is None:
        first_seen: dict[int, int] = {}
        labels = [first_seen.setdefault(id(f), i) for i, f in enumerate(factors)]
    by_label = {lb: np.asarray(f, dtype=complex) for lb, f in zip(labels, factors)}
    # distinct label sequences in sorted order: the accumulation order depends
    # only on the multiset, so the average is bitwise invariant under any
    # permutation of the input word, with exact weighting of repeated factors
    orderings = sorted(set(itertools.permutations(labels)), key=repr)
    acc = np.zeros_like(next(iter(by_label.values())))
    for ordering in orderings:
        prod = by_label[ordering[0]]
        for lb in ordering[1:]:
            prod = prod @ by_label[lb]
        acc = acc + prod
    return acc / len(orderings)


def symmetrize(word: OperatorWord) -> OperatorMatrix:
    """Symmetrized (all-orderings average) operator for a word."""
    space = None
    for lb in word.labels:
        op = word.alphabet[lb]
        if isinstance(op, OperatorMatrix):
            space = op.space
            break
    if space is None:
        raise TypeError("alphabet must map labels to OperatorMatrix to recover the space")
    mats = [np.asarray(word.alphabet[lb]) for lb in word.labels]
    return OperatorMatrix(space, symmetrize_matrices(mats, labels=list(word.labels)))


def expand_inverse_power(n: float, order: int) -> tuple[float, ...]:
    """Taylor coefficients of (1 + u)^(-n) through the requested order.

    Covers the inverse-power replacements (positive integer n) and the
    half-integer square-root dressings of the field quadratures (n = +-1/2).
    Order 1 reproduces the linear replacement 1 - n u.
    """
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    if n == 0:
        raise ValueError("n must be nonzero")
    coeffs = [1.0]
    cur = 1.0
    for i in range(1, order + 1):
        cur *= (-n - (i - 1)) / i
        coeffs.append(cur)
    return tuple(coeffs)


def _as_data(op: np.ndarray | OperatorMatrix) -> np.ndarray:
    return np.asarray(op, dtype=complex)


def commutator(
    A: np.ndarray | OperatorMatrix, B: np.ndarray | OperatorMatrix
) -> np.ndarray | OperatorMatrix:
    """[A, B] = AB - BA; returns an OperatorMatrix when either input carries a space."""
    da, db = _as_data(A), _as_data(B)
    data = da @ db - db @ da
    for op in (A, B):
        if isinstance(op, OperatorMatrix):
            return OperatorMatrix(op.space, data)
    return data


def spectrum(H: np.ndarray | OperatorMatrix, k: int | None = None) -> np.ndarray:
    """Lowest k eigenvalues (ascending) of a Hermitian operator.

    Rejects inputs whose hermiticity defect exceeds 1e-10 relative to the
    largest entry, and verifies the eigenpair residuals afterwards.
    """
    data = _as_data(H)
    scale = max(1.0, float(np.abs(data).max()))
    defect = float(np.abs(data - data.conj().T).max())
    if defect > HERMITICITY_RTOL * scale:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e} at scale {scale:.3e})")
    herm = 0.5 * (data + data.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    norm = max(1.0, float(np.abs(vals).max()))
    resid = np.abs(herm @ vecs - vecs * vals).max()
    if resid > EIG_RESIDUAL_RTOL * norm:
        raise ArithmeticError(f"eigenpair residual {resid:.3e} exceeds {EIG_RESIDUAL_RTOL} * norm")
    return vals if k is None else vals[: int(k)]


def bogoliubov_pair(rho: complex, ops: ModeOperators) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Squeezing-mixed mode operators A = a^dag sinh(rho) + a cosh(rho) and
    B = b^dag cosh(rho) + b sinh(rho).

    For real rho the interior commutator [A, A^dag] equals the identity; the
    complex-rho case is returned as-is (its commutator is not canonical and
    is treated as a report-only quantity).
    """
    sh, ch = np.sinh(rho), np.cosh(rho)
    A = ops.adag * sh + ops.a * ch
    B = ops.bdag * ch + ops.b * sh
    return ops.wrap(A), ops.wrap(B)


def squared_annihilator(ops: ModeOperators) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Half the squared mechanical annihilator, c = b^2 / 2, and [c, c^dag].

    On the interior block [c, c^dag] = m + 1/2; coherent states are
    eigenvectors of c with eigenvalue z^2/2.
    """
    if ops.space.n_mech < 4:
        raise ValueError("need n_mech >= 4 to resolve the squared annihilator")
    c = 0.5 * (ops.b @ ops.b)
    cdag = c.conj().T
    return ops.wrap(c), ops.wrap(c @ cdag - cdag @ c)


def displacement(ops: ModeOperators, amp: complex) -> np.ndarray:
    """Optical displacement exp(amp a^dag - conj(amp) a) (dense exponential)."""
    return expm(amp * ops.adag - np.conj(amp) * ops.a)


def coherent_state(n: int, z: complex) -> np.ndarray:
    """Truncated coherent-state vector on an n-level ladder."""
    m = np.arange(n)
    log_fact = np.cumsum(np.log(np.maximum(m, 1)))
    amps = np.exp(-0.5 * abs(z) ** 2) * z**m / np.exp(0.5 * log_fact)
    return amps.astype(complex)
