"""General-n pure-state indicator functions for partitions and labels.

Given a reduction entropy F (any strictly-positive-on-mixed,
zero-on-pure functional), the basic building block is

    f_K(psi) = F(pi_K),   pi_K the reduction onto subsystem set K,

which vanishes exactly when psi splits off K as a tensor factor.  These
compose upward:

    f_alpha(psi) = sum of f_L over the blocks of partition alpha
                   (0 for the single-block partition: nothing to trace),
    f_label(psi) = product of f_alpha over the partitions of a label.

f_label vanishes exactly on pure states separable under at least one
partition below some member of the label, which is what makes its convex
roof a membership test for the mixed-state classes.

The m-variants replace the block sum by an arithmetic mean and the label
product by a geometric mean; with a concave entropy this combination is
the one suited for entanglement monotones, so non-concave entropies are
rejected there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .partitions import Partition
from .states import (
    StateVector,
    concurrence_squared,
    renyi_entropy,
    tsallis_entropy,
    von_neumann_entropy,
)

_KINDS = ("vonNeumann", "tsallis", "renyi", "concurrenceSq")


@dataclass(frozen=True)
class EntropySpec:
    """Choice of reduction entropy F: kind plus order q where applicable."""

    kind: str
    q: float | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown entropy kind {self.kind!r}; choose from {_KINDS}")
        if self.kind in ("tsallis", "renyi"):
            if self.q is None or self.q <= 0:
                raise ValueError(f"{self.kind} entropy needs an order q > 0")
        elif self.q is not None:
            raise ValueError(f"{self.kind} entropy takes no order parameter")

    @property
    def is_concave(self) -> bool:
        if self.kind == "renyi":
            return self.q < 1
        return True

    def of(self, rho) -> float:
        """Evaluate F on a density matrix (or an eigenvalue vector)."""
        if self.kind == "vonNeumann":
            return von_neumann_entropy(rho)
        if self.kind == "tsallis":
            return tsallis_entropy(rho, self.q)
        if self.kind == "renyi":
            return renyi_entropy(rho, self.q)
        return concurrence_squared(rho)

    def matrix_derivative(self, rho: np.ndarray) -> np.ndarray:
        """dF/drho as a matrix, so that dF = tr(F'(rho) drho).

        Spectra are floored at 1e-15 where the derivative is singular
        (vonNeumann, and tsallis/renyi with q < 1).
        """
        vals, vecs = np.linalg.eigh(rho)
        vals = np.clip(vals.real, 1e-15, None)
        if self.kind == "vonNeumann":
            dvals = -(np.log(vals) + 1.0)
        elif self.kind == "tsallis":
            dvals = self.q / (1.0 - self.q) * vals ** (self.q - 1.0) if self.q != 1 \
                else -(np.log(vals) + 1.0)
        elif self.kind == "renyi":
            if self.q == 1:
                dvals = -(np.log(vals) + 1.0)
            else:
                dvals = self.q * vals ** (self.q - 1.0) / ((1.0 - self.q) * np.sum(vals**self.q))
        else:
            d = vals.size
            dvals = -2.0 * d / (d - 1) * vals
        return (vecs * dvals) @ vecs.conj().T


DEFAULT_ENTROPY = EntropySpec("tsallis", 2.0)


@dataclass(frozen=True)
class IndicatorSpec:
    """A label indicator: entropy choice plus how blocks and partitions combine.

    ``blockCombiner`` is ``sum`` (plain f) or ``arithmeticMean`` (m);
    ``combiner`` is ``product`` (plain f) or ``geometricMean`` (m).  The
    monotone preset is (arithmeticMean, geometricMean) with a concave
    entropy.
    """

    label: frozenset
    entropy: EntropySpec = DEFAULT_ENTROPY
    combiner: str = "product"
    block_combiner: str = "sum"

    def __post_init__(self):
        if self.combiner not in ("product", "geometricMean"):
            raise ValueError("combiner must be 'product' or 'geometricMean'")
        if self.block_combiner not in ("sum", "arithmeticMean"):
            raise ValueError("blockCombiner must be 'sum' or 'arithmeticMean'")
        if (self.combiner == "geometricMean" or self.block_combiner == "arithmeticMean") \
                and not self.entropy.is_concave:
            raise ValueError(
                "mean-combined indicators require a concave entropy "
                "(Renyi q > 1 rejected: the monotone construction breaks)"
            )

    def evaluate(self, psi: StateVector) -> float:
        parts = []
        for alpha in sorted(self.label):
            val = _blocks_value(psi, alpha, self.entropy, self.block_combiner)
            parts.append(val)
        if self.combiner == "product":
            return float(np.prod(parts))
        return float(np.prod(parts)) ** (1.0 / len(parts))


def _validate_subset(k, n) -> tuple[int, ...]:
    kk = tuple(sorted(int(x) for x in k))
    if not kk or len(set(kk)) != len(kk):
        raise ValueError("K must be a nonempty set of subsystem indices")
    if any(not 1 <= x <= n for x in kk):
        raise ValueError(f"subsystem indices must lie in 1..{n}")
    if len(kk) == n:
        raise ValueError("K must be a proper subset of the subsystems")
    return kk


def reduction(psi: StateVector, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of a pure state on the kept subsystems (raw ndarray).

    Unlike the DensityMatrix route, this works for unnormalised vectors,
    which keeps the indicator functions homogeneous.
    """
    keep = tuple(sorted(keep))
    tensor = psi.tensor()
    comp = [ax for ax in range(psi.n) if ax + 1 not in keep]
    red = np.tensordot(tensor, tensor.conj(), axes=(comp, comp))
    d = math.prod(psi.dims[ax - 1] for ax in keep)
    return red.reshape(d, d)


def f_K(psi: StateVector, k, entropy: EntropySpec = DEFAULT_ENTROPY) -> float:
    """F of the reduction onto K; zero iff K splits off as a tensor factor."""
    kk = _validate_subset(k, psi.n)
    return entropy.of(reduction(psi, kk))


def _blocks_value(psi, alpha: Partition, entropy, block_combiner) -> float:
    if alpha.n != psi.n:
        raise ValueError(f"partition of {alpha.n} subsystems does not fit state with {psi.n}")
    if alpha.num_blocks == 1:
        # trivial partition: every state trivially "separates" into one factor
        return 0.0
    vals = [f_K(psi, block, entropy) for block in alpha.blocks]
    total = float(np.sum(vals))
    if block_combiner == "arithmeticMean":
        return total / alpha.num_blocks
    return total


def f_alpha(psi: StateVector, alpha: Partition, entropy: EntropySpec = DEFAULT_ENTROPY) -> float:
    """Sum of block entropies; vanishes iff psi is separable under some
    partition refining-or-equal alpha."""
    return _blocks_value(psi, alpha, entropy, "sum")


def f_label(psi: StateVector, label, entropy: EntropySpec = DEFAULT_ENTROPY) -> float:
    """Product over the label's partitions of f_alpha; vanishes iff psi is
    separable under some partition below at least one member."""
    if not label:
        raise ValueError("label must contain at least one partition")
    out = 1.0
    for alpha in sorted(label):
        out *= f_alpha(psi, alpha, entropy)
    return out


def _require_concave(entropy: EntropySpec):
    if not entropy.is_concave:
        raise ValueError(
            "m-indicators need a concave entropy for the monotone construction; "
            f"got {entropy.kind} with q={entropy.q} (Renyi q > 1 is not concave)"
        )


def m_alpha(psi: StateVector, alpha: Partition, entropy: EntropySpec = DEFAULT_ENTROPY) -> float:
    """Arithmetic mean of block entropies (concave entropy required)."""
    _require_concave(entropy)
    return _blocks_value(psi, alpha, entropy, "arithmeticMean")


def m_label(psi: StateVector, label, entropy: EntropySpec = DEFAULT_ENTROPY) -> float:
    """Geometric mean over the label of m_alpha (concave entropy required)."""
    _require_concave(entropy)
    if not label:
        raise ValueError("label must contain at least one partition")
    vals = [m_alpha(psi, alpha, entropy) for alpha in sorted(label)]
    return float(np.prod(vals)) ** (1.0 / len(vals))


def geometric_mean_average_inequality_check(p, x, tol: float = 1e-12) -> bool:
    """Check the Cauchy-Bunyakowski-Schwarz-like bound and its averaged form.

    With x an (m, q) nonnegative matrix (rows indexed by i, columns by j):

        sum_i prod_j x_i(j)  <=  prod_j ||x(j)||_q            (q-norm columns)
        sum_i p_i geomean_j x_i(j)  <=  geomean_j sum_i p_i x_i(j)

    Both must hold within ``tol`` (scaled to the right-hand side).
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError("x must be a 2-d matrix of values")
    if np.any(x < 0) or np.any(p < 0):
        raise ValueError("weights and values must be nonnegative")
    if p.shape != (x.shape[0],):
        raise ValueError("p must have one weight per row of x")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("weights must lie on the simplex")
    q = x.shape[1]

    lhs = float(np.sum(np.prod(x, axis=1)))
    rhs = float(np.prod(np.sum(x**q, axis=0) ** (1.0 / q)))
    ok_cbs = lhs <= rhs + tol * max(1.0, rhs)

    lhs_avg = float(np.sum(p * np.prod(x, axis=1) ** (1.0 / q)))
    rhs_avg = float(np.prod(np.sum(p[:, None] * x, axis=0)) ** (1.0 / q))
    ok_avg = lhs_avg <= rhs_avg + tol * max(1.0, rhs_avg)
    return ok_cbs and ok_avg


# ---------------------------------------------------------------------------
# batched evaluation with Wirtinger derivatives (for the roof optimiser)

def _batch_tensor(p, dims):
    arr = np.asarray(p, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return arr.reshape(arr.shape[0], *dims)


def _batch_reductions(tensors, keep, dims):
    """Reductions pi_K for every member of a batch: (m, dK, dK)."""
    n = len(dims)
    comp = [ax for ax in range(n) if ax + 1 not in keep]
    src = list(range(1, n + 1))
    dst = [ax + n + 1 if ax + 1 in keep else ax + 1 for ax in range(n)]
    out_axes = [0] + [ax + 1 for ax in range(n) if ax + 1 in keep] \
        + [ax + n + 1 for ax in range(n) if ax + 1 in keep]
    red = np.einsum(tensors, [0] + src, tensors.conj(), [0] + dst, out_axes)
    dk = math.prod(dims[ax - 1] for ax in keep)
    return red.reshape(red.shape[0], dk, dk)


def _apply_on_subset(tensors, op, keep, dims):
    """Apply an operator acting on the kept subsystems to each batch member."""
    n = len(dims)
    keep = tuple(keep)
    dk = op.shape[0]
    op_tensor = op.reshape(
        tuple(dims[k - 1] for k in keep) + tuple(dims[k - 1] for k in keep)
    )
    nk = len(keep)
    out = np.tensordot(tensors, op_tensor, axes=([k for k in keep], list(range(nk, 2 * nk))))
    # tensordot moved the contracted axes to the end; restore original order
    remaining = [0] + [ax + 1 for ax in range(n) if ax + 1 not in keep]
    order = np.argsort(remaining + [k for k in keep])
    return out.transpose(order)


def label_objective(dims, label, entropy: EntropySpec = DEFAULT_ENTROPY):
    """Batched (values, wirtinger) callables for f_label on given dims.

    Rows of the input are unit-norm pure states; the Wirtinger map
    returns dF/d(conj psi) row-wise, composed through the product and
    block-sum structure by the product rule.
    """
    alphas = sorted(label)
    if not alphas:
        raise ValueError("label must contain at least one partition")
    n = len(dims)
    if any(a.n != n for a in alphas):
        raise ValueError("label partitions do not match the state dimensions")

    fast_q2 = entropy.kind == "tsallis" and entropy.q == 2

    def values(p):
        tensors = _batch_tensor(p, dims)
        m = tensors.shape[0]
        per_alpha = np.empty((len(alphas), m))
        for ai, alpha in enumerate(alphas):
            if alpha.num_blocks == 1:
                per_alpha[ai] = 0.0
                continue
            acc = np.zeros(m)
            for block in alpha.blocks:
                red = _batch_reductions(tensors, block, dims)
                if fast_q2:
                    acc += 1.0 - np.einsum("bij,bij->b", red, red.conj()).real
                else:
                    acc += np.array([entropy.of(red[i]) for i in range(m)])
            per_alpha[ai] = acc
        return np.prod(per_alpha, axis=0)

    def wirtinger(p):
        tensors = _batch_tensor(p, dims)
        m = tensors.shape[0]
        flat = tensors.reshape(m, -1)
        per_alpha = np.empty((len(alphas), m))
        walpha = np.zeros((len(alphas), m, flat.shape[1]), dtype=np.complex128)
        for ai, alpha in enumerate(alphas):
            if alpha.num_blocks == 1:
                per_alpha[ai] = 0.0
                continue
            acc = np.zeros(m)
            for block in alpha.blocks:
                red = _batch_reductions(tensors, block, dims)
                for i in range(m):
                    if fast_q2:
                        acc[i] += 1.0 - float(np.vdot(red[i], red[i]).real)
                        deriv = -2.0 * red[i]
                    else:
                        acc[i] += entropy.of(red[i])
                        deriv = entropy.matrix_derivative(red[i])
                    contrib = _apply_on_subset(tensors[i][None, ...], deriv, block, dims)
                    walpha[ai, i] += contrib.reshape(-1)
            per_alpha[ai] = acc
        out = np.zeros_like(walpha[0])
        for ai in range(len(alphas)):
            others = np.ones(m)
            for aj in range(len(alphas)):
                if aj != ai:
                    others *= per_alpha[aj]
            out += others[:, None] * walpha[ai]
        return out

    return values, wirtinger
