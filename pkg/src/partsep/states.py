"""State vectors, density matrices, reductions, entropies, random ensembles.

Subsystems are indexed 1..n throughout, matching the partition module.
All arrays are complex128; JSON round-trips are bit-exact at double
precision because the serialiser prints shortest round-trip floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
PSD_TOL = -1e-10
TRACE_TOL = 1e-10
RANK_CUTOFF = 1e-12


def _as_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise ValueError("dims must be a nonempty tuple of integers >= 2")
    return dims


@dataclass(frozen=True)
class StateVector:
    """A pure state on a tensor product of finite-dimensional factors."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", _as_dims(self.dims))
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != math.prod(self.dims):
            raise ValueError(
                f"amplitude vector has length {amps.size}, expected {math.prod(self.dims)}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0.0:
            raise ValueError("cannot normalise the zero vector")
        return StateVector(self.dims, self.amplitudes / nrm)

    def density_matrix(self) -> "DensityMatrix":
        psi = self.normalized().amplitudes
        return DensityMatrix(self.dims, np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """A trace-one positive-semidefinite operator on a tensor product space.

    Construction validates Hermiticity to 1e-12, positivity of the
    spectrum to -1e-10, and unit trace to 1e-10.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "dims", _as_dims(self.dims))
        d = math.prod(self.dims)
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.shape != (d, d):
            raise ValueError(f"matrix has shape {mat.shape}, expected {(d, d)}")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        eigs = np.linalg.eigvalsh(mat)
        if eigs.min() < PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {eigs.min():.3e}")
        if abs(mat.trace().real - 1.0) > TRACE_TOL or abs(mat.trace().imag) > TRACE_TOL:
            raise ValueError("density matrix trace differs from one by more than 1e-10")
        object.__setattr__(self, "matrix", mat)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    @classmethod
    def from_mixture(cls, weights, states) -> "DensityMatrix":
        """Convex mixture of pure states (weights renormalised defensively)."""
        weights = np.asarray(weights, dtype=float)
        if np.any(weights < 0):
            raise ValueError("mixture weights must be nonnegative")
        weights = weights / weights.sum()
        dims = states[0].dims
        mat = np.zeros((math.prod(dims),) * 2, dtype=np.complex128)
        for w, psi in zip(weights, states):
            if psi.dims != dims:
                raise ValueError("all mixture members must share the same dims")
            v = psi.normalized().amplitudes
            mat += w * np.outer(v, v.conj())
        return cls(dims, mat)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigendecomposition of a density matrix with a fixed rank cutoff.

    Eigenvalues are sorted descending and entries below 1e-12 are zeroed;
    the retained leading block defines the support used by decomposition
    machinery downstream.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns match eigenvalues

    @classmethod
    def of(cls, rho: DensityMatrix, cutoff: float = RANK_CUTOFF) -> "SpectralDecomposition":
        vals, vecs = np.linalg.eigh(rho.matrix)
        order = np.argsort(vals)[::-1]
        vals, vecs = vals[order].copy(), vecs[:, order].copy()
        vals[vals < cutoff] = 0.0
        return cls(vals, vecs)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.eigenvalues))

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        r = self.rank
        return self.eigenvalues[:r], self.eigenvectors[:, :r]

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


# ---------------------------------------------------------------------------
# reductions and transposes

def _normalise_subsystems(subsystems, n) -> tuple[int, ...]:
    if isinstance(subsystems, int):
        subsystems = (subsystems,)
    subs = tuple(int(s) for s in subsystems)
    if len(set(subs)) != len(subs) or any(not 1 <= s <= n for s in subs):
        raise ValueError(f"subsystem indices must be distinct and within 1..{n}")
    return subs


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out everything except the (1-based) subsystems in ``keep``."""
    keep = _normalise_subsystems(keep, rho.n)
    if not keep:
        raise ValueError("must keep at least one subsystem")
    n = rho.n
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    row = list(range(n))
    col = [n + i if (i + 1) in keep else i for i in range(n)]
    out_row = [i for i in range(n) if (i + 1) in keep]
    out_col = [n + i for i in out_row]
    reduced = np.einsum(tensor, row + col, out_row + out_col)
    new_dims = tuple(rho.dims[i] for i in range(n) if (i + 1) in keep)
    d = math.prod(new_dims)
    return DensityMatrix(new_dims, reduced.reshape(d, d))


def partial_transpose(rho: DensityMatrix, subsystems) -> np.ndarray:
    """Transpose the given subsystems; returns a Hermitian ndarray.

    The result is generally not positive, so it is deliberately not
    wrapped as a :class:`DensityMatrix`.
    """
    subs = _normalise_subsystems(subsystems, rho.n)
    n = rho.n
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    axes = list(range(2 * n))
    for s in subs:
        i = s - 1
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return tensor.transpose(axes).reshape(rho.dim, rho.dim)


def is_ppt(rho: DensityMatrix, subsystem: int = 1, tol: float = -PSD_TOL) -> bool:
    """Positive partial transpose test, conclusive for 2x2 and 2x3 systems.

    Only bipartite dims (2,2), (2,3) and (3,2) are accepted, where PPT
    is equivalent to separability.
    """
    if rho.dims not in ((2, 2), (2, 3), (3, 2)):
        raise ValueError(
            f"PPT is conclusive only for dims (2,2), (2,3), (3,2); got {rho.dims}"
        )
    pt = partial_transpose(rho, subsystem)
    return bool(np.linalg.eigvalsh(pt).min() >= -tol)


# ---------------------------------------------------------------------------
# entropies

def _spectrum(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        mat = rho.matrix
    else:
        mat = np.asarray(rho)
        if mat.ndim == 1:
            return np.clip(mat.real, 0.0, None)
    return np.clip(np.linalg.eigvalsh(mat), 0.0, None)


def von_neumann_entropy(rho) -> float:
    """S = -tr(rho ln rho), natural logarithm."""
    lam = _spectrum(rho)
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log(lam)))


def tsallis_entropy(rho, q: float) -> float:
    """S_q = (tr rho^q - 1)/(1 - q) for q > 0; q = 1 gives the limit."""
    if q <= 0:
        raise ValueError("Tsallis order must be positive")
    if q == 1:
        return von_neumann_entropy(rho)
    lam = _spectrum(rho)
    lam = lam[lam > 0]
    return float((np.sum(lam**q) - 1.0) / (1.0 - q))


def renyi_entropy(rho, q: float) -> float:
    """Renyi entropy ln(tr rho^q)/(1 - q) for q > 0; q = 1 gives the limit."""
    if q <= 0:
        raise ValueError("Renyi order must be positive")
    if q == 1:
        return von_neumann_entropy(rho)
    lam = _spectrum(rho)
    lam = lam[lam > 0]
    return float(np.log(np.sum(lam**q)) / (1.0 - q))


def concurrence_squared(rho) -> float:
    """Squared generalised concurrence d/(d-1) (1 - tr rho^2)."""
    lam = _spectrum(rho)
    d = lam.size
    return float(d / (d - 1) * (1.0 - np.sum(lam**2)))


def purity(rho) -> float:
    lam = _spectrum(rho)
    return float(np.sum(lam**2))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the trace norm of the difference of two Hermitian matrices."""
    diff = np.asarray(a) - np.asarray(b)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


# ---------------------------------------------------------------------------
# random ensembles

def random_state(dims, seed=None) -> StateVector:
    """Haar-random pure state: normalised complex Gaussian amplitudes."""
    rng = np.random.default_rng(seed)
    dims = _as_dims(dims)
    d = math.prod(dims)
    amps = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return StateVector(dims, amps / np.linalg.norm(amps))


def _haar_unitary(d: int, rng) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(a)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_local_unitary(dims, seed=None) -> list[np.ndarray]:
    """One Haar-random unitary per site (QR with phase fix)."""
    rng = np.random.default_rng(seed)
    return [_haar_unitary(d, rng) for d in _as_dims(dims)]


def random_local_invertible(dims, seed=None, sv_range=(0.5, 2.0)) -> list[np.ndarray]:
    """One well-conditioned random invertible matrix per site.

    Built as U diag(s) V with Haar-random unitaries and singular values
    drawn uniformly from ``sv_range``, so condition numbers stay bounded
    and downstream zero-pattern checks are not polluted by near-singular
    maps.
    """
    lo, hi = sv_range
    if not 0 < lo <= hi:
        raise ValueError("singular-value range must satisfy 0 < lo <= hi")
    rng = np.random.default_rng(seed)
    ops = []
    for d in _as_dims(dims):
        u = _haar_unitary(d, rng)
        v = _haar_unitary(d, rng)
        s = rng.uniform(lo, hi, size=d)
        ops.append((u * s) @ v)
    return ops


def apply_local(ops, psi: StateVector) -> StateVector:
    """Apply a list of per-site operators (one per subsystem) to a state."""
    if len(ops) != psi.n:
        raise ValueError("need exactly one operator per subsystem")
    tensor = psi.tensor()
    for i, op in enumerate(ops):
        tensor = np.moveaxis(np.tensordot(op, tensor, axes=([1], [i])), 0, i)
    return StateVector(psi.dims, tensor.reshape(-1))


# ---------------------------------------------------------------------------
# JSON wire formats

def _pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in values]


def _unpairs(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def state_to_json(psi: StateVector) -> str:
    return json.dumps({"dims": list(psi.dims), "amplitudes": _pairs(psi.amplitudes)})


def state_from_json(text: str) -> StateVector:
    obj = json.loads(text)
    try:
        dims = obj["dims"]
        amps = _unpairs(obj["amplitudes"])
    except (KeyError, TypeError) as err:
        raise ValueError(f"malformed state object: {err}") from err
    return StateVector(tuple(dims), amps)


def density_to_json(rho: DensityMatrix) -> str:
    flat = _pairs(rho.matrix.reshape(-1))
    return json.dumps({"dims": list(rho.dims), "matrix": flat})


def density_from_json(text: str) -> DensityMatrix:
    obj = json.loads(text)
    try:
        dims = tuple(obj["dims"])
        flat = _unpairs(obj["matrix"])
    except (KeyError, TypeError) as err:
        raise ValueError(f"malformed density-matrix object: {err}") from err
    d = math.prod(dims)
    if flat.size != d * d:
        raise ValueError(f"matrix has {flat.size} entries, expected {d * d}")
    return DensityMatrix(dims, flat.reshape(d, d))
