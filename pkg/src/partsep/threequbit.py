"""Three-qubit covariants, invariants, canonical form, and Wootters formulas.

The local-filtering covariants of a three-qubit vector psi^{ijk} are
contractions with the antisymmetric form

    eps = [[0, 1], [-1, 0]]:

    gamma_1^{ii'} = eps_{jj'} eps_{kk'} psi^{ijk} psi^{i'j'k'}   (cyclic for 2, 3)

    T^{ijk} = -eps_{ll'} eps_{mm'} eps_{nn'} psi^{imn} psi^{lm'n'} psi^{l'jk}
            = -eps_{mm'} eps_{nn'} eps_{ll'} psi^{ljn} psi^{l'mn'} psi^{im'k}
            = -eps_{nn'} eps_{ll'} eps_{mm'} psi^{lmk} psi^{l'm'n} psi^{ijn'}

    q = eps_{ii'} eps_{jj'} eps_{kk'} eps_{ll'} eps_{mm'} eps_{nn'}
        psi^{ikl} psi^{jk'l'} psi^{i'mn} psi^{j'm'n'}

The coefficient tables of these contractions are materialised once, at
import time, by explicit loops over the two-valued indices; evaluation
is then plain multilinear algebra, which keeps repeated evaluation (and
the gradients needed by roof optimisation) fast.

Derived scalar measures:

    n = |psi|^2,  g_a = |gamma_a|^2,  s_a = g_b + g_c,
    y = (2/3)(g_1 + g_2 + g_3),  t = 4 |T|^2,  tau^2 = 4 |q|^2,

with the three-tangle tau = 2|q| and hyperdeterminant Det = -q/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .states import DensityMatrix, SpectralDecomposition, StateVector, partial_trace

EPS = np.array([[0.0, 1.0], [-1.0, 0.0]])

_T_FORM_TOL = 1e-10
_I4_TOL = 1e-10


def _flat(i, j, k) -> int:
    return 4 * i + 2 * j + k


def _build_gamma_tables() -> np.ndarray:
    """Coefficient tables G[a, c, c', p, q] with gamma_a^{cc'} = psi_p G psi_q."""
    g = np.zeros((3, 2, 2, 8, 8))
    rng = (0, 1)
    for i in rng:
        for ip in rng:
            for j in rng:
                for jp in rng:
                    for k in rng:
                        for kp in rng:
                            p, q = _flat(i, j, k), _flat(ip, jp, kp)
                            g[0, i, ip, p, q] += EPS[j, jp] * EPS[k, kp]
                            g[1, j, jp, p, q] += EPS[k, kp] * EPS[i, ip]
                            g[2, k, kp, p, q] += EPS[i, ip] * EPS[j, jp]
    return g


def _build_t_tables() -> np.ndarray:
    """The three printed forms of T as tables TT[form, o, p, q, r]."""
    t = np.zeros((3, 8, 8, 8, 8))
    rng = (0, 1)
    for i in rng:
        for j in rng:
            for k in rng:
                o = _flat(i, j, k)
                for l in rng:
                    for lp in rng:
                        for m in rng:
                            for mp in rng:
                                for n in rng:
                                    for np_ in rng:
                                        w = EPS[l, lp] * EPS[m, mp] * EPS[n, np_]
                                        t[0, o, _flat(i, m, n), _flat(l, mp, np_), _flat(lp, j, k)] -= w
                                        t[1, o, _flat(l, j, n), _flat(lp, m, np_), _flat(i, mp, k)] -= w
                                        t[2, o, _flat(l, m, k), _flat(lp, mp, n), _flat(i, j, np_)] -= w
    return t


def _build_q_table() -> np.ndarray:
    """Coefficients Q[p, q, r, s] of the quartic invariant q(psi)."""
    table = np.zeros((8, 8, 8, 8))
    rng = (0, 1)
    for i in rng:
        for ip in rng:
            for j in rng:
                for jp in rng:
                    for k in rng:
                        for kp in rng:
                            for l in rng:
                                for lp in rng:
                                    for m in rng:
                                        for mp in rng:
                                            for n in rng:
                                                for np_ in rng:
                                                    table[
                                                        _flat(i, k, l),
                                                        _flat(j, kp, lp),
                                                        _flat(ip, m, n),
                                                        _flat(jp, mp, np_),
                                                    ] += (
                                                        EPS[i, ip] * EPS[j, jp]
                                                        * EPS[k, kp] * EPS[l, lp]
                                                        * EPS[m, mp] * EPS[n, np_]
                                                    )
    return table


def _symmetrize(table: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    out = np.zeros_like(table)
    for perm in permutations(axes):
        order = list(range(table.ndim))
        for src, dst in zip(axes, perm):
            order[src] = dst
        out += table.transpose(order)
    return out / math.factorial(len(axes))


GAMMA_TABLES = _build_gamma_tables()
T_TABLES = _build_t_tables()
Q_TABLE = _build_q_table()

# slot-symmetrised versions used for derivatives of the multilinear forms
GAMMA_SYM = 0.5 * (GAMMA_TABLES + GAMMA_TABLES.transpose(0, 1, 2, 4, 3))
T_SYM = _symmetrize(T_TABLES[0], axes=(1, 2, 3))
Q_SYM = _symmetrize(Q_TABLE, axes=(0, 1, 2, 3))


def _amps(psi) -> np.ndarray:
    if isinstance(psi, StateVector):
        if psi.dims != (2, 2, 2):
            raise ValueError(f"expected a three-qubit state, got dims {psi.dims}")
        return psi.amplitudes
    arr = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if arr.size != 8:
        raise ValueError("expected 8 amplitudes for a three-qubit state")
    return arr


@dataclass(frozen=True)
class FtsCovariants:
    """The covariants of one vector: three gammas, the cubic T, the quartic q."""

    gamma: tuple[np.ndarray, np.ndarray, np.ndarray]
    t_tensor: np.ndarray
    q: complex


def fts_covariants(psi) -> FtsCovariants:
    """Evaluate all covariants, cross-checking the three forms of T.

    The three printed contractions of T must agree to 1e-10 (scaled by
    the cube of the norm for unnormalised input); a mismatch indicates a
    broken table and raises ArithmeticError.
    """
    v = _amps(psi)
    gam = np.einsum("acdpq,p,q->acd", GAMMA_TABLES, v, v)
    t_forms = np.einsum("fopqr,p,q,r->fo", T_TABLES, v, v, v)
    scale = max(1.0, float(np.linalg.norm(v)) ** 3)
    spread = np.max(np.abs(t_forms - t_forms[0]))
    if spread > _T_FORM_TOL * scale:
        raise ArithmeticError(f"the three forms of T disagree by {spread:.3e}")
    q = complex(np.einsum("pqrs,p,q,r,s->", Q_TABLE, v, v, v, v))
    return FtsCovariants(
        gamma=(gam[0], gam[1], gam[2]),
        t_tensor=t_forms[0],
        q=q,
    )


@dataclass(frozen=True)
class InvariantVector:
    """The scalar indicator vector (n, y, s_a, g_a, t, tau^2) of a pure state."""

    n: float
    y: float
    s: tuple[float, float, float]
    g: tuple[float, float, float]
    t: float
    tau_sq: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "y": self.y,
            "s1": self.s[0], "s2": self.s[1], "s3": self.s[2],
            "g1": self.g[0], "g2": self.g[1], "g3": self.g[2],
            "t": self.t,
            "tau2": self.tau_sq,
        }

    def values(self) -> np.ndarray:
        return np.array([self.n, self.y, *self.s, *self.g, self.t, self.tau_sq])


def indicator_vector(psi) -> InvariantVector:
    """All scalar indicators of a three-qubit vector, from the covariants."""
    cov = fts_covariants(psi)
    v = _amps(psi)
    g = tuple(float(np.sum(np.abs(gam) ** 2)) for gam in cov.gamma)
    t = 4.0 * float(np.sum(np.abs(cov.t_tensor) ** 2))
    tau_sq = 4.0 * abs(cov.q) ** 2
    return InvariantVector(
        n=float(np.vdot(v, v).real),
        y=(2.0 / 3.0) * sum(g),
        s=(g[1] + g[2], g[0] + g[2], g[0] + g[1]),
        g=g,
        t=t,
        tau_sq=tau_sq,
    )


def hyperdeterminant(psi) -> complex:
    """Cayley hyperdeterminant, Det = -q/2."""
    v = _amps(psi)
    return complex(-0.5 * np.einsum("pqrs,p,q,r,s->", Q_TABLE, v, v, v, v))


def three_tangle(psi) -> float:
    """tau = 4 |Det| = 2 |q|."""
    return 4.0 * abs(hyperdeterminant(psi))


# ---------------------------------------------------------------------------
# Sudbery's polynomial invariants

@dataclass(frozen=True)
class SudberyInvariants:
    i0: float
    i1: float
    i2: float
    i3: float
    i4: float
    i5: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.i0, self.i1, self.i2, self.i3, self.i4, self.i5)


def sudbery_invariants(psi) -> SudberyInvariants:
    """The algebraically independent polynomial invariants I_0 .. I_5.

    I_0 is the squared norm, I_a the purity of the one-qubit reduction a,
    I_4 the Kempe invariant (computed from all three pair choices, which
    must agree to 1e-10), and I_5 the squared modulus of the
    hyperdeterminant.
    """
    v = _amps(psi)
    tensor = v.reshape(2, 2, 2)
    single = []
    pairs = {}
    for a in (1, 2, 3):
        keep = [a - 1]
        comp = [ax for ax in range(3) if ax not in keep]
        mat = np.tensordot(tensor, tensor.conj(), axes=(comp, comp))
        single.append(mat)
    for b, c in ((2, 3), (1, 3), (1, 2)):
        comp = [ax for ax in range(3) if ax + 1 not in (b, c)]
        red = np.tensordot(tensor, tensor.conj(), axes=(comp, comp))
        pairs[(b, c)] = red.reshape(4, 4)

    i0 = float(np.vdot(v, v).real)
    i_single = [float(np.trace(m @ m).real) for m in single]

    kempe = []
    for b, c in ((2, 3), (1, 3), (1, 2)):
        pb, pc = single[b - 1], single[c - 1]
        pbc = pairs[(b, c)]
        val = (
            3.0 * np.trace(np.kron(pb, pc) @ pbc)
            - np.trace(np.linalg.matrix_power(pb, 3))
            - np.trace(np.linalg.matrix_power(pc, 3))
        )
        kempe.append(float(val.real))
    scale = max(1.0, i0**3)
    if max(kempe) - min(kempe) > _I4_TOL * scale:
        raise ArithmeticError(
            f"Kempe invariant differs across pair choices by {max(kempe) - min(kempe):.3e}"
        )

    i5 = abs(hyperdeterminant(v)) ** 2
    return SudberyInvariants(i0, *i_single, kempe[0], i5)


# ---------------------------------------------------------------------------
# canonical form

@dataclass(frozen=True)
class CanonicalParams:
    """Parameters of the one-sided Schmidt-like canonical form.

    eta are five nonnegative amplitudes summing to one; alpha is the
    single phase, conventionally in [0, pi].
    """

    eta: tuple[float, float, float, float, float]
    alpha: float

    def __post_init__(self):
        eta = tuple(float(x) for x in self.eta)
        if len(eta) != 5 or any(x < 0 for x in eta):
            raise ValueError("eta must be five nonnegative numbers")
        if abs(sum(eta) - 1.0) > 1e-10:
            raise ValueError("eta must sum to one")
        if not 0.0 <= float(self.alpha) <= math.pi + 1e-12:
            raise ValueError("alpha must lie in [0, pi]")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def delta(self) -> float:
        e = self.eta
        return abs(math.sqrt(e[1] * e[4]) * np.exp(1j * self.alpha) - math.sqrt(e[2] * e[3])) ** 2


def schmidt_canonical_state(params: CanonicalParams) -> StateVector:
    """The vector sqrt(eta0)|000> + e^{i alpha} sqrt(eta1)|100> + sqrt(eta2)|101>
    + sqrt(eta3)|110> + sqrt(eta4)|111>."""
    e = params.eta
    amps = np.zeros(8, dtype=np.complex128)
    amps[0] = math.sqrt(e[0])
    amps[4] = np.exp(1j * params.alpha) * math.sqrt(e[1])
    amps[5] = math.sqrt(e[2])
    amps[6] = math.sqrt(e[3])
    amps[7] = math.sqrt(e[4])
    return StateVector((2, 2, 2), amps)


def j_invariants(params: CanonicalParams) -> tuple[float, float, float, float, float]:
    """The five independent invariants J_1..J_5 of the canonical form."""
    e = params.eta
    delta = params.delta
    return (
        delta,
        e[0] * e[2],
        e[0] * e[3],
        e[0] * e[4],
        e[0] * (delta + e[2] * e[3] - e[1] * e[4]),
    )


def invariants_from_j(j) -> InvariantVector:
    """The indicator vector expressed through J_1..J_5 (normalised states)."""
    j1, j2, j3, j4, j5 = (float(x) for x in j)
    g = tuple(2.0 * j4 + 4.0 * ja for ja in (j1, j2, j3))
    return InvariantVector(
        n=1.0,
        y=4.0 * j4 + (8.0 / 3.0) * (j1 + j2 + j3),
        s=tuple(4.0 * (j4 + j1 + j2 + j3 - ja) for ja in (j1, j2, j3)),
        g=g,
        t=4.0 * j4 + 8.0 * j5,
        tau_sq=(4.0 * j4) ** 2,
    )


# ---------------------------------------------------------------------------
# Wootters concurrence and fidelity of two-qubit states

_EPS2 = np.kron(EPS, EPS)


def pure_concurrence(chi) -> float:
    """Concurrence |<chi~|chi>| = |eps_{ii'} eps_{jj'} chi^{ij} chi^{i'j'}| of a
    two-qubit vector (vanishes exactly on product states)."""
    if isinstance(chi, StateVector):
        if chi.dims != (2, 2):
            raise ValueError(f"expected a two-qubit state, got dims {chi.dims}")
        v = chi.amplitudes
    else:
        v = np.asarray(chi, dtype=np.complex128).reshape(-1)
        if v.size != 4:
            raise ValueError("expected 4 amplitudes for a two-qubit state")
    return abs(complex(v @ _EPS2 @ v))


def wootters_lambdas(omega: DensityMatrix) -> np.ndarray:
    """Decreasing square roots of the eigenvalues of omega * omega~.

    omega~ = (eps x eps) conj(omega) (eps x eps).  The eigenvalues are
    extracted on the support of omega: with omega = V L V^dagger the
    nonzero eigenvalues of omega*omega~ equal those of the r x r block
    L C L conj(C), C = V^dagger (eps x eps) conj(V).  Working on the
    support avoids square-root amplification of rounding noise in the
    exactly-zero eigenvalues, which matters for rank-deficient input.
    """
    if omega.dims != (2, 2):
        raise ValueError(f"Wootters formula needs a two-qubit state, got dims {omega.dims}")
    spec = SpectralDecomposition.of(omega)
    lam, vecs = spec.support()
    block_c = vecs.conj().T @ _EPS2 @ vecs.conj()
    block = (lam[:, None] * block_c) * lam[None, :] @ block_c.conj()
    mu = np.linalg.eigvals(block).real
    mu = np.sqrt(np.clip(mu, 0.0, None))
    out = np.zeros(4)
    out[: mu.size] = np.sort(mu)[::-1]
    return out


def wootters_concurrence(omega: DensityMatrix) -> float:
    """max(0, lambda1 - lambda2 - lambda3 - lambda4)."""
    lam = wootters_lambdas(omega)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def fidelity_concurrence(omega: DensityMatrix) -> float:
    """lambda1 + lambda2 + lambda3 + lambda4, the fidelity with the spin flip."""
    return float(wootters_lambdas(omega).sum())


def two_qubit_reductions(psi: StateVector) -> dict[tuple[int, int], DensityMatrix]:
    """The three two-qubit reductions of a pure three-qubit state."""
    rho = psi.density_matrix()
    return {
        (1, 2): partial_trace(rho, (1, 2)),
        (1, 3): partial_trace(rho, (1, 3)),
        (2, 3): partial_trace(rho, (2, 3)),
    }


# ---------------------------------------------------------------------------
# batched evaluation and Wirtinger derivatives of the scalar measures
# (used by the roof optimiser; P is an (m, 8) array of row vectors)

def _batch(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.complex128)
    return arr.reshape(1, -1) if arr.ndim == 1 else arr


def g_values(p, a: int) -> np.ndarray:
    gam = np.einsum("cdpq,bp,bq->bcd", GAMMA_TABLES[a - 1], _batch(p), _batch(p))
    return np.sum(np.abs(gam) ** 2, axis=(1, 2))


def g_wirtinger(p, a: int) -> np.ndarray:
    p = _batch(p)
    gs = GAMMA_SYM[a - 1]
    gam = np.einsum("cdpq,bp,bq->bcd", gs, p, p)
    dgam = 2.0 * np.einsum("cdpq,bq->bcdp", gs, p)
    return np.einsum("bcd,bcdp->bp", gam, dgam.conj())


def t_values(p) -> np.ndarray:
    tt = np.einsum("opqr,bp,bq,br->bo", T_TABLES[0], _batch(p), _batch(p), _batch(p))
    return 4.0 * np.sum(np.abs(tt) ** 2, axis=1)


def t_wirtinger(p) -> np.ndarray:
    p = _batch(p)
    tt = np.einsum("opqr,bp,bq,br->bo", T_SYM, p, p, p)
    dtt = 3.0 * np.einsum("opqr,bq,br->bop", T_SYM, p, p)
    return 4.0 * np.einsum("bo,bop->bp", tt, dtt.conj())


def q_values(p) -> np.ndarray:
    p = _batch(p)
    return np.einsum("pqrs,bp,bq,br,bs->b", Q_TABLE, p, p, p, p)


def tau_sq_values(p) -> np.ndarray:
    return 4.0 * np.abs(q_values(p)) ** 2


def tau_sq_wirtinger(p) -> np.ndarray:
    p = _batch(p)
    qv = np.einsum("pqrs,bp,bq,br,bs->b", Q_SYM, p, p, p, p)
    dq = 4.0 * np.einsum("pqrs,bq,br,bs->bp", Q_SYM, p, p, p)
    return 4.0 * qv[:, None] * dq.conj()


def s_values(p, a: int) -> np.ndarray:
    b, c = sorted({1, 2, 3} - {a})
    return g_values(p, b) + g_values(p, c)


def s_wirtinger(p, a: int) -> np.ndarray:
    b, c = sorted({1, 2, 3} - {a})
    return g_wirtinger(p, b) + g_wirtinger(p, c)


def y_values(p) -> np.ndarray:
    return (2.0 / 3.0) * (g_values(p, 1) + g_values(p, 2) + g_values(p, 3))


def y_wirtinger(p) -> np.ndarray:
    return (2.0 / 3.0) * (g_wirtinger(p, 1) + g_wirtinger(p, 2) + g_wirtinger(p, 3))


def concurrence_values(p) -> np.ndarray:
    p = _batch(p)
    return np.abs(np.einsum("pq,bp,bq->b", _EPS2, p, p))


def concurrence_wirtinger(p) -> np.ndarray:
    p = _batch(p)
    bil = np.einsum("pq,bp,bq->b", _EPS2, p, p)
    dbil = 2.0 * np.einsum("pq,bq->bp", _EPS2, p)
    mod = np.abs(bil)
    safe = np.where(mod > 1e-14, mod, 1.0)
    coef = np.where(mod > 1e-14, bil / (2.0 * safe), 0.0)
    return coef[:, None] * dbil.conj()
