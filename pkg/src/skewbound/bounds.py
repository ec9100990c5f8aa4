"""State-independent lower bounds from a bipartite spectral embedding.

The sum of skew informations of a collection of operators equals a bilinear
form of a PSD operator ``H_tot`` on the doubled space, evaluated between the
purification-like vectors ``|Phi~^s> = sum_i lambda_i^s |i>|i*>``.  Ground and
first-excited eigenvalues of ``H_tot`` then bound the sum for every state.

Two doubling conventions appear:

* ``transpose`` pairing, ``(A (x) I - I (x) A^T)/sqrt(2)``, matches the
  conjugated vectors above and carries the skew-information identity;
* ``plain`` pairing, ``(A (x) I - I (x) A)/sqrt(2)``, matches the
  unconjugated doubling ``|psi>|psi>`` and is valid for pure-state variance
  sums only.  It is the classical eigenvalue-minimization machinery and often
  gives different (sometimes better) pure-state floors.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CommonEigenstateWarning,
    DimensionMismatch,
    DomainError,
    NoFeasibleChiWarning,
)
from .linalg import (
    DEFAULT_TOL,
    DensityOperator,
    Tolerances,
    as_operator,
    density,
    hermitian_eigen,
    partial_trace_second,
    random_density,
    sqrt_trace,
)
from .moments import (
    MeanOrder,
    as_mean_order,
    gen_skew,
    hermitian_split,
    require_hermitian,
    wyd_skew,
)

__all__ = [
    "OperatorSet",
    "EmbeddingVectors",
    "SpectralBound",
    "embedding",
    "h_op",
    "h_tot",
    "bound_wy",
    "bound_wyd",
    "tighten_alpha_scan",
    "pure_variance_bound",
    "bound_genskew",
    "empirical_minimum",
    "separability_witness",
    "WitnessResult",
]

_ZERO_CUTOFF = 1e-14


@dataclass(frozen=True)
class OperatorSet:
    """A collection of same-dimension operators with cached Hermitian splits."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(as_operator(A) for A in self.operators)
        if not ops:
            raise DomainError("operator set is empty")
        d = ops[0].shape[0]
        for A in ops:
            if A.shape[0] != d:
                raise DimensionMismatch("operators must share one dimension")
        comps = []
        for A in ops:
            sp = hermitian_split(A)
            for C in (sp.a1, sp.a2):
                if np.max(np.abs(C)) > _ZERO_CUTOFF:
                    comps.append(C)
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "_components", tuple(comps))

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def components(self):
        """Nonzero Hermitian split parts of every operator."""
        return self._components


def _as_set(ops) -> OperatorSet:
    if isinstance(ops, OperatorSet):
        return ops
    return OperatorSet(tuple(ops))


@dataclass(frozen=True)
class EmbeddingVectors:
    """Unnormalized doubled-space vectors carrying the skew bilinear form."""

    phi_s: np.ndarray
    phi_1ms: np.ndarray
    norms: tuple  # (<phi_s|phi_s>, <phi_1ms|phi_1ms>) = (Tr rho^2s, Tr rho^(2-2s))


@dataclass(frozen=True)
class SpectralBound:
    """Result of a spectral lower bound on a sum of skew informations."""

    epsilon0: float
    epsilon1: float
    epsilonK: float
    bound: float
    used_excited: bool
    interval: tuple
    saturating_state: Optional[DensityOperator]


def embedding(rho: DensityOperator, s: float) -> EmbeddingVectors:
    """Vectors sum_i lambda_i^s |i>|i*> for exponents s and 1-s."""
    if not 0 < s < 1:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    w, V = rho.eigenvalues, rho.eigenvectors
    d = rho.dim
    phi_s = np.zeros(d * d, dtype=complex)
    phi_1ms = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if w[i] <= 0:
            continue
        pair = np.kron(V[:, i], V[:, i].conj())
        phi_s += w[i] ** s * pair
        phi_1ms += w[i] ** (1 - s) * pair
    norms = (float(np.sum(w ** (2 * s))), float(np.sum(w ** (2 * (1 - s)))))
    return EmbeddingVectors(phi_s=phi_s, phi_1ms=phi_1ms, norms=norms)


def h_op(A_hermitian, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Doubled-space generator (A (x) I - I (x) A^T)/sqrt(2).

    Its kernel contains every |a_i>|a_i*> built from eigenvectors of A, so
    squares of these generators vanish exactly on conjugation-symmetric
    product directions.
    """
    A = require_hermitian(A_hermitian, tol)
    d = A.shape[0]
    I = np.eye(d)
    return (np.kron(A, I) - np.kron(I, A.T)) / math.sqrt(2)


def _h_plain(C: np.ndarray) -> np.ndarray:
    d = C.shape[0]
    I = np.eye(d)
    return (np.kron(C, I) - np.kron(I, C)) / math.sqrt(2)


def h_tot(ops, pairing: str = "transpose", tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """PSD total operator: sum of squared generators of all split parts."""
    oset = _as_set(ops)
    d = oset.dim
    H = np.zeros((d * d, d * d), dtype=complex)
    for C in oset.components():
        Hk = h_op(C, tol) if pairing == "transpose" else _h_plain(C)
        H += Hk @ Hk
    return H


def _share_eigenstate(C1: np.ndarray, C2: np.ndarray, tol: float = 1e-8) -> bool:
    """Exact common-eigenvector test, degeneracy-aware."""
    w, V = np.linalg.eigh(C1)
    scale = max(1.0, float(np.max(np.abs(C2))))
    i = 0
    d = len(w)
    while i < d:
        j = i
        while j + 1 < d and w[j + 1] - w[i] < tol:
            j += 1
        P = V[:, i : j + 1]
        B = P.conj().T @ C2 @ P
        _, U = np.linalg.eigh((B + B.conj().T) / 2)
        for k in range(U.shape[1]):
            v = P @ U[:, k]
            mu = v.conj() @ C2 @ v
            if np.linalg.norm(C2 @ v - mu * v) < tol * scale:
                return True
        i = j + 1
    return False


def _check_no_common_eigenstate(components) -> bool:
    """Precondition of the nonzero bound: some pair shares no eigenstate.

    Failure is warning-grade (the ground eigenvalue, which is then 0, is
    still a valid bound), but the first-excited fallback is disabled: with a
    shared eigenstate the kernel contains product vectors, so the fallback's
    maximally-entangled-kernel argument breaks down.
    """
    n = len(components)
    ok = False
    if n >= 2:
        for i in range(n):
            for j in range(i + 1, n):
                if not _share_eigenstate(components[i], components[j]):
                    ok = True
                    break
            if ok:
                break
    if not ok:
        warnings.warn(
            "every pair of split components shares an eigenstate (or the set "
            "is trivial); the bound degrades to the ground eigenvalue",
            CommonEigenstateWarning,
            stacklevel=3,
        )
    return ok


def _eig_gaps(H, tol: Tolerances):
    """Spectrum of H plus (eps0, eps1, epsK, ground projector columns)."""
    w, V = hermitian_eigen(H, tol)
    epsK = float(w[-1])
    tol_eig = 1e-8 * max(1.0, epsK)
    eps0 = max(float(w[0]), 0.0)
    ground = w <= w[0] + tol_eig
    above = w[~ground]
    eps1 = float(above[0]) if above.size else eps0
    eps1 = max(eps1, eps0)
    return w, V, eps0, eps1, epsK, ground, tol_eig


def _spectral_bound(
    H, rho: DensityOperator, tol: Tolerances, allow_excited: bool = True
) -> SpectralBound:
    w, V, eps0, eps1, epsK, ground, tol_eig = _eig_gaps(H, tol)
    d = rho.dim
    emb = embedding(rho, 0.5)
    phi = emb.phi_s / math.sqrt(max(emb.norms[0], 1e-300))
    ov2 = float(np.sum(np.abs(V[:, ground].conj().T @ phi) ** 2))
    hi = epsK - (epsK - eps0) * min(ov2, 1.0)
    used_excited = eps0 <= tol_eig and allow_excited
    if used_excited:
        bound = eps1 * max(0.0, 1.0 - sqrt_trace(rho) ** 2 / d)
    else:
        bound = eps0
    v0 = V[:, int(np.argmax(ground))] if ground.any() else V[:, 0]
    red = partial_trace_second(np.outer(v0, v0.conj()), (d, d))
    red = (red + red.conj().T) / 2
    sat = None
    if float(np.linalg.eigvalsh(red)[-1]) < 1 - 1e-8:  # entangled ground vector
        sat = density(red / np.trace(red).real, tol)
    return SpectralBound(
        epsilon0=eps0,
        epsilon1=eps1,
        epsilonK=epsK,
        bound=max(bound, 0.0),
        used_excited=used_excited,
        interval=(eps0, max(hi, eps0)),
        saturating_state=sat,
    )


def bound_wy(ops, rho: DensityOperator, tol: Tolerances = DEFAULT_TOL) -> SpectralBound:
    """Lower bound on sum_k I_rho(A_k) at s = 1/2.

    Ground eigenvalue of H_tot when it is positive; otherwise the
    first-excited fallback eps1 * (1 - (Tr sqrt(rho))^2 / d).
    """
    oset = _as_set(ops)
    if oset.dim != rho.dim:
        raise DimensionMismatch("operator and state dimensions differ")
    ok = _check_no_common_eigenstate(oset.components())
    return _spectral_bound(h_tot(oset, tol=tol), rho, tol, allow_excited=ok)


def bound_genskew(ops, rho: DensityOperator, orders, tol: Tolerances = DEFAULT_TOL) -> SpectralBound:
    """Same spectral machinery bounding sum_k of generalized skews.

    Valid for any order list because every generalized skew dominates the
    symmetric skew information; the state-independent part is identical.
    """
    oset = _as_set(ops)
    orders = [as_mean_order(o) for o in orders]
    if len(orders) != len(oset.operators):
        raise DomainError("need one mean order per operator")
    return bound_wy(oset, rho, tol)


_CHI_OVERLAP_FLOOR = 1e-14


def _feasible_f(chi, ref1, ref2):
    """f(tau1, tau2) for one reference state, or None if infeasible.

    The minimal feasible tau_i is the Gram-Schmidt residual norm
    sqrt(1/|<chi|ref_i>|^2 - 1); f decreases in each argument on the feasible
    region, so the minimal pair maximizes f.
    """
    o1 = abs(np.vdot(chi, ref1)) ** 2
    o2 = abs(np.vdot(chi, ref2)) ** 2
    if o1 < _CHI_OVERLAP_FLOOR or o2 < _CHI_OVERLAP_FLOOR:
        return None
    t1 = math.sqrt(max(0.0, 1.0 / o1 - 1.0))
    t2 = math.sqrt(max(0.0, 1.0 / o2 - 1.0))
    if t1 * t2 >= 1.0:
        return None
    return (1.0 - t1 * t2) / ((1.0 + t1 * t1) * (1.0 + t2 * t2))


def bound_wyd(
    ops,
    rho: DensityOperator,
    s: float,
    chi_candidates: Optional[Sequence[np.ndarray]] = None,
    tol: Tolerances = DEFAULT_TOL,
) -> SpectralBound:
    """Lower bound on sum_k I^s_rho(A_k) for s != 1/2.

    The bilinear form is no longer an expectation value, so the spectral
    bound is filtered through a reverse Cauchy-Schwarz factor built from
    reference states chi.  The default candidates each collapse one overlap
    to 1; callers may supply more.  If every candidate is infeasible the
    bound degrades to 0 with a warning.
    """
    if not 0 < s < 1:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    if abs(s - 0.5) < 1e-12:
        raise DomainError("s = 1/2 has an exact spectral bound; use bound_wy")
    oset = _as_set(ops)
    if oset.dim != rho.dim:
        raise DimensionMismatch("operator and state dimensions differ")
    ok = _check_no_common_eigenstate(oset.components())
    d = rho.dim
    H = h_tot(oset, tol=tol)
    base = _spectral_bound(H, rho, tol, allow_excited=ok)
    w = rho.eigenvalues
    theta = math.sqrt(float(np.sum(w ** (2 * s))) * float(np.sum(w ** (2 * (1 - s)))))
    emb = embedding(rho, s)
    phis = emb.phi_s / math.sqrt(max(emb.norms[0], 1e-300))
    phi1s = emb.phi_1ms / math.sqrt(max(emb.norms[1], 1e-300))
    Hp1s = H @ emb.phi_1ms
    Hps = H @ emb.phi_s
    n1 = np.linalg.norm(Hp1s)
    n2 = np.linalg.norm(Hps)
    phiH1s = Hp1s / n1 if n1 > 1e-12 else None
    phiHs = Hps / n2 if n2 > 1e-12 else None
    mes = np.zeros(d * d, dtype=complex)
    for i in range(d):
        e = np.zeros(d)
        e[i] = 1.0
        mes += np.kron(e, e)
    mes /= math.sqrt(d)
    candidates = [phis, phi1s, mes]
    if phiH1s is not None:
        candidates.append(phiH1s)
    if phiHs is not None:
        candidates.append(phiHs)
    if chi_candidates:
        for chi in chi_candidates:
            v = np.asarray(chi, dtype=complex).ravel()
            n = np.linalg.norm(v)
            if v.size == d * d and n > 0:
                candidates.append(v / n)

    def excited_factor(exp: float) -> float:
        num = float(np.sum(w**exp)) ** 2
        den = float(np.sum(w ** (2 * exp)))
        return math.sqrt(max(0.0, 1.0 - num / (d * den)))

    best = None
    branches = []
    if phiH1s is not None:
        branches.append((phis, phiH1s, excited_factor(1 - s)))
    if phiHs is not None:
        branches.append((phi1s, phiHs, excited_factor(s)))
    for chi in candidates:
        for ref1, ref2, fac in branches:
            f = _feasible_f(chi, ref1, ref2)
            if f is None:
                continue
            if base.used_excited:
                val = f * fac * theta * base.epsilon1
            else:
                val = f * theta * base.epsilon0
            best = val if best is None else max(best, val)
    if best is None:
        warnings.warn(
            "no feasible reference state; reporting bound 0",
            NoFeasibleChiWarning,
            stacklevel=2,
        )
        best = 0.0
    return SpectralBound(
        epsilon0=base.epsilon0,
        epsilon1=base.epsilon1,
        epsilonK=base.epsilonK,
        bound=max(best, 0.0),
        used_excited=base.used_excited,
        interval=base.interval,
        saturating_state=base.saturating_state,
    )


def tighten_alpha_scan(
    ops,
    grid_points: int = 201,
    pairing: str = "transpose",
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Pure-state variance floor from shifted-operator ground eigenvalues.

    For each split component C and shift alpha in its eigenvalue range the
    operator ``H_tot + (C - alpha) (x) (C - alpha)^T`` (transpose pairing; the
    plain pairing drops the transpose) is PSD, and its ground eigenvalue
    bounds the pure-state variance sum on the slice <C> = alpha.  Minimizing
    over the grid and maximizing over components tightens the plain ground
    eigenvalue.  The grid is a documented approximation of the continuum
    minimum; returns max(scan, eps0).
    """
    if grid_points < 2:
        raise DomainError("grid_points must be at least 2")
    if pairing not in ("transpose", "plain"):
        raise DomainError(f"unknown pairing {pairing!r}")
    oset = _as_set(ops)
    d = oset.dim
    H = h_tot(oset, pairing=pairing, tol=tol)
    best = max(float(np.linalg.eigvalsh(H)[0]), 0.0)
    I = np.eye(d)
    for C in oset.components():
        evs = np.linalg.eigvalsh(C)
        lo, hi = float(evs[0]), float(evs[-1])
        if hi - lo < 1e-14:
            continue  # multiple of identity: zero variance always
        worst = None
        for alpha in np.linspace(lo, hi, grid_points):
            Ca = C - alpha * I
            pair = Ca.T if pairing == "transpose" else Ca
            g = float(np.linalg.eigvalsh(H + np.kron(Ca, pair))[0])
            worst = g if worst is None else min(worst, g)
        if worst is not None:
            best = max(best, worst)
    return best


def pure_variance_bound(ops, grid_points: int = 201, tol: Tolerances = DEFAULT_TOL) -> float:
    """State-independent floor of sum_k <dA_k>^2 over pure states.

    Uses the plain-pairing machinery (valid for the unconjugated doubling
    |psi>|psi>), whose scan is frequently tighter than the transpose form for
    pure-state variance sums.
    """
    return tighten_alpha_scan(ops, grid_points=grid_points, pairing="plain", tol=tol)


def _sum_value(ops, rho, s_or_order, tol):
    oset = _as_set(ops)
    if isinstance(s_or_order, (list, tuple)):
        orders = [as_mean_order(o) for o in s_or_order]
        if len(orders) != len(oset.operators):
            raise DomainError("need one mean order per operator")
        return sum(gen_skew(A, rho, o, tol) for A, o in zip(oset.operators, orders))
    if isinstance(s_or_order, MeanOrder):
        return sum(gen_skew(A, rho, s_or_order, tol) for A in oset.operators)
    s = float(s_or_order)
    if 0 < s < 1:
        return sum(wyd_skew(A, rho, s, tol) for A in oset.operators)
    return sum(gen_skew(A, rho, as_mean_order(s), tol) for A in oset.operators)


_CHUNK = 256


def empirical_minimum(
    ops,
    s_or_order,
    samples: int,
    seed,
    ranks: Optional[Sequence[int]] = None,
    jobs: int = 1,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Sampling oracle: min over random states of the relevant skew sum.

    ``s_or_order``: a float in (0, 1) selects the s-family, a nonpositive
    float or MeanOrder the generalized family, a list one order per operator.
    States are Hilbert-Schmidt samples with ranks drawn uniformly from
    ``ranks`` (default: 1..d).  Deterministic for a fixed seed regardless of
    ``jobs``: the stream is chunked and each chunk owns a spawned seed.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    oset = _as_set(ops)
    d = oset.dim
    rank_pool = tuple(ranks) if ranks else tuple(range(1, d + 1))
    for r in rank_pool:
        if not 1 <= r <= d:
            raise DomainError(f"rank {r} outside [1, {d}]")
    ss = np.random.SeedSequence(seed)
    n_chunks = (samples + _CHUNK - 1) // _CHUNK
    children = ss.spawn(n_chunks)

    def run_chunk(idx: int) -> float:
        rng = np.random.default_rng(children[idx])
        count = min(_CHUNK, samples - idx * _CHUNK)
        best = math.inf
        for _ in range(count):
            rank = rank_pool[rng.integers(0, len(rank_pool))]
            rho = random_density(d, int(rank), rng)
            best = min(best, _sum_value(oset, rho, s_or_order, tol))
        return best

    if jobs > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            minima = list(pool.map(run_chunk, range(n_chunks)))
    else:
        minima = [run_chunk(i) for i in range(n_chunks)]
    return min(minima)


@dataclass(frozen=True)
class WitnessResult:
    lhs: float
    threshold: float
    violated: bool


def separability_witness(
    opsA,
    opsB,
    rho_AB: DensityOperator,
    grid_points: int = 201,
    tol: Tolerances = DEFAULT_TOL,
) -> WitnessResult:
    """Variance-sum entanglement witness on a bipartite state.

    Separable states obey lhs >= threshold where the threshold adds the
    pure-state variance floors of the two local operator sets; a violation
    certifies entanglement.
    """
    setA, setB = _as_set(opsA), _as_set(opsB)
    if len(setA.operators) != len(setB.operators):
        raise DimensionMismatch("need equally many operators on each side")
    dA, dB = setA.dim, setB.dim
    if rho_AB.dim != dA * dB:
        raise DimensionMismatch(f"state dim {rho_AB.dim} != {dA}*{dB}")
    from .moments import variance

    IA, IB = np.eye(dA), np.eye(dB)
    lhs = 0.0
    for A, B in zip(setA.operators, setB.operators):
        joint = np.kron(A, IB) + np.kron(IA, B)
        lhs += variance(joint, rho_AB, tol)
    threshold = pure_variance_bound(setA, grid_points, tol) + pure_variance_bound(
        setB, grid_points, tol
    )
    return WitnessResult(
        lhs=float(lhs),
        threshold=float(threshold),
        violated=bool(lhs < threshold - tol.tol_residual),
    )
