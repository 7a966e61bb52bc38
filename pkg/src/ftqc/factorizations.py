"""Truncated and factorized representations of the two-body interaction.

Four interchangeable representations feed the qubitized-walk cost models:

* sparse: keep symmetry-unique entries above a magnitude threshold;
* single factorization: V = sum_l W_l (x) W_l from the PSD flattening;
* double factorization: each W_l eigendecomposed and truncated;
* tensor hypercontraction: V ~ G with G_pqrs = sum_{mu,nu}
  chi_p^mu chi_q^mu zeta_{mu,nu} chi_r^nu chi_s^nu.

Each representation carries an induced 1-norm (lambda) that sets the walk
step count, split into one-body and two-body parts, plus the identity shift
its block encoding discards.  The shift formulas here are the single source
of truth for the spectrum checks in :mod:`ftqc.verify`.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .tensors import IntegralData, compute_T, count_unique_above

UNIT_COLUMN_ATOL = 1e-10
ZETA_SYMMETRY_ATOL = 1e-12
PSD_RTOL = 1e-8

SCHEMA_VERSION = 1


@dataclasses.dataclass(frozen=True)
class LambdaReport:
    """Induced 1-norm of a block encoding, split by term origin.

    provenance records the truncation parameters that produced the
    representation (threshold, rank, etc.).
    """

    method: str
    lambda_one: float
    lambda_two: float
    provenance: dict = dataclasses.field(default_factory=dict)

    @property
    def total(self) -> float:
        return self.lambda_one + self.lambda_two

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "one_body": self.lambda_one,
            "two_body": self.lambda_two,
            "total": self.total,
            "provenance": dict(self.provenance),
        }


@dataclasses.dataclass(frozen=True)
class EncodedOperator:
    """Effective Hamiltonian terms realized by a block encoding.

    The walk operator encodes F1(one_body) + F2(two_body) - shift, where F1
    is the spin-summed one-body map and F2 the chemist-ordered two-body map.
    The spectrum of the encoded operator lies within [-lambda, lambda].
    """

    one_body: np.ndarray
    two_body: np.ndarray
    shift: float


@dataclasses.dataclass(frozen=True)
class SparseRep:
    """Thresholded two-body tensor stored as symmetry-unique entries.

    entries holds one (p, q, r, s, value) per surviving 8-fold orbit, with
    p <= q, r <= s and (p, q) <= (r, s); every stored magnitude is strictly
    above threshold.  d counts the state-preparation data items: surviving
    two-body entries plus the n(n+1)/2 one-body slots.
    """

    n_spatial: int
    entries: tuple
    threshold: float
    d: int

    def __post_init__(self):
        for p, q, r, s, value in self.entries:
            if abs(value) <= self.threshold:
                raise ValueError(
                    f"entry ({p},{q},{r},{s}) magnitude {abs(value):.3e} "
                    f"not above threshold {self.threshold:.3e}"
                )

    def dense(self) -> np.ndarray:
        """Expand the stored orbits back to a full 8-fold-symmetric tensor."""
        n = self.n_spatial
        V = np.zeros((n, n, n, n))
        for p, q, r, s, value in self.entries:
            for a, b in {(p, q), (q, p)}:
                for c, d_ in {(r, s), (s, r)}:
                    V[a, b, c, d_] = value
                    V[c, d_, a, b] = value
        return V


@dataclasses.dataclass(frozen=True)
class SFRep:
    """Single factorization V = sum_l W_l (x) W_l.

    Ws are symmetric (n, n) matrices ordered by descending eigenvalue of the
    flattened two-body matrix, square-root weights absorbed.
    """

    n_spatial: int
    Ws: tuple

    @property
    def L(self) -> int:
        return len(self.Ws)

    def reconstruct(self) -> np.ndarray:
        n = self.n_spatial
        V = np.zeros((n, n, n, n))
        for W in self.Ws:
            V += np.einsum("pq,rs->pqrs", W, W)
        return V


@dataclasses.dataclass(frozen=True)
class DFRep:
    """Double factorization: per-l eigenbases with truncated spectra.

    fs[l] holds the retained eigenvalues of W_l sorted by descending
    magnitude (ties keep the eigensolver's ascending-eigenvalue order);
    Us[l] holds the matching orthonormal eigenvectors as columns.
    """

    n_spatial: int
    fs: tuple
    Us: tuple
    threshold: float

    def __post_init__(self):
        for l, U in enumerate(self.Us):
            gram = U.T @ U
            dev = float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
            if dev > 1e-10:
                raise ValueError(f"eigenvector block {l} not orthonormal ({dev:.3e})")

    @property
    def L(self) -> int:
        return len(self.fs)

    @property
    def Xi_total(self) -> int:
        return int(sum(len(f) for f in self.fs))

    @property
    def Xi_avg(self) -> float:
        return self.Xi_total / self.L if self.L else 0.0

    def W_list(self) -> list:
        """Truncated W_l = U diag(f) U^T for each retained l."""
        return [(U * f) @ U.T for f, U in zip(self.fs, self.Us)]

    def reconstruct(self) -> np.ndarray:
        n = self.n_spatial
        V = np.zeros((n, n, n, n))
        for W in self.W_list():
            V += np.einsum("pq,rs->pqrs", W, W)
        return V


@dataclasses.dataclass(frozen=True)
class THCRep:
    """Tensor hypercontraction factors.

    chi has shape (n, M) with unit-2-norm columns; zeta is the symmetric
    (M, M) core matrix.
    """

    chi: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        chi = np.ascontiguousarray(np.asarray(self.chi, dtype=float))
        zeta = np.ascontiguousarray(np.asarray(self.zeta, dtype=float))
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "zeta", zeta)
        if chi.ndim != 2:
            raise ValueError("chi must be a 2-d array")
        M = chi.shape[1]
        if zeta.shape != (M, M):
            raise ValueError(f"zeta must have shape {(M, M)}, got {zeta.shape}")
        norms = np.linalg.norm(chi, axis=0)
        if np.max(np.abs(norms - 1.0)) > UNIT_COLUMN_ATOL:
            raise ValueError("chi columns must have unit 2-norm")
        dev = float(np.max(np.abs(zeta - zeta.T))) if M else 0.0
        if dev > ZETA_SYMMETRY_ATOL:
            raise ValueError(f"zeta is not symmetric (max deviation {dev:.3e})")

    @property
    def M(self) -> int:
        return self.chi.shape[1]

    @property
    def n_spatial(self) -> int:
        return self.chi.shape[0]


def sparse_truncate(data: IntegralData, Tprime: np.ndarray, threshold: float):
    """Drop two-body entries at or below threshold.

    Returns the sparse representation together with its lambda report.  The
    one-body part sums |T'_pq| over all entries (T' must come from the exact,
    untruncated V); the two-body part is half the entrywise 1-norm of the
    surviving tensor, counting all n^4 positions.
    """
    V = data.V
    n = data.n_spatial
    mask = np.abs(V) > threshold
    rows, cols = np.triu_indices(n)
    entries = []
    for a in range(rows.size):
        p, q = int(rows[a]), int(cols[a])
        for b in range(a, rows.size):
            r, s = int(rows[b]), int(cols[b])
            if mask[p, q, r, s]:
                entries.append((p, q, r, s, float(V[p, q, r, s])))
    d = len(entries) + n * (n + 1) // 2
    rep = SparseRep(n_spatial=n, entries=tuple(entries), threshold=float(threshold), d=d)
    lam = lambda_sparse(rep, Tprime)
    return rep, lam


def lambda_sparse(rep: SparseRep, Tprime: np.ndarray) -> LambdaReport:
    """Induced 1-norm of the sparse encoding.

    lambda_1 = sum_pq |T'_pq|, lambda_2 = (1/2) sum over all n^4 entries of
    the truncated tensor.
    """
    lam_one = float(np.sum(np.abs(Tprime)))
    lam_two = 0.5 * float(np.sum(np.abs(rep.dense())))
    return LambdaReport(
        method="sparse",
        lambda_one=lam_one,
        lambda_two=lam_two,
        provenance={"threshold": rep.threshold, "d": rep.d},
    )


def single_factorize(
    data: IntegralData,
    target_L: int | None = None,
    tolerance: float | None = None,
) -> SFRep:
    """Eigendecompose the flattened two-body matrix into V = sum_l W_l (x) W_l.

    The (n^2, n^2) flattening of an 8-fold-symmetric V maps antisymmetric
    vectors to zero, so every eigenvector with nonzero eigenvalue reshapes to
    a symmetric W_l.  Vectors are kept in descending-eigenvalue order until
    target_L terms are collected, or until the largest residual diagonal
    element of the flattened matrix drops below tolerance.  Eigenvalues below
    -|w|_max * 1e-8 mean the tensor is not PSD and are rejected; small
    negative values are clipped to zero.
    """
    n = data.n_spatial
    M = data.V.reshape(n * n, n * n)
    M = (M + M.T) / 2.0
    w, U = np.linalg.eigh(M)
    w = w[::-1].copy()
    U = U[:, ::-1].copy()
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
    if w.size and float(w[-1]) < -PSD_RTOL * scale:
        raise ValueError(
            f"two-body tensor is not positive semidefinite "
            f"(eigenvalue {float(w[-1]):.3e})"
        )
    w = np.clip(w, 0.0, None)

    keep = int(np.count_nonzero(w > 0.0))
    if target_L is not None:
        keep = min(keep, int(target_L))
    elif tolerance is not None:
        residual = np.diag(M).copy()
        keep_tol = 0
        for l in range(w.size):
            if w[l] <= 0.0 or float(np.max(residual)) < tolerance:
                break
            residual -= w[l] * U[:, l] ** 2
            keep_tol += 1
        keep = keep_tol

    Ws = []
    for l in range(keep):
        W = np.sqrt(w[l]) * U[:, l].reshape(n, n)
        Ws.append((W + W.T) / 2.0)
    return SFRep(n_spatial=n, Ws=tuple(Ws))


def lambda_sf(rep: SFRep, Tprime: np.ndarray) -> LambdaReport:
    """Induced 1-norm of the single-factorized encoding.

    The squared one-body blocks are recentred, so the two-body part is
    (1/4) sum_l (sum_pq |W^l_pq|)^2; the one-body part is the entrywise
    1-norm of T'.
    """
    lam_one = float(np.sum(np.abs(Tprime)))
    lam_two = 0.25 * float(sum(np.sum(np.abs(W)) ** 2 for W in rep.Ws))
    return LambdaReport(
        method="sf",
        lambda_one=lam_one,
        lambda_two=lam_two,
        provenance={"L": rep.L},
    )


def double_factorize(rep: SFRep, threshold: float) -> DFRep:
    """Truncate each W_l spectrum, dropping small eigenvalue contributions.

    Eigenvalue m of vector l is discarded when (sum_p |f_p^l|) |f_m^l| falls
    below threshold, with the first factor evaluated before truncation.  The
    first l whose retained count reaches zero ends the outer expansion, so
    later vectors are dropped entirely.
    """
    fs = []
    Us = []
    for W in rep.Ws:
        f, U = np.linalg.eigh(W)
        order = np.argsort(-np.abs(f), kind="stable")
        f = f[order]
        U = U[:, order]
        weight = float(np.sum(np.abs(f)))
        keep = np.abs(f) * weight >= threshold
        xi = int(np.count_nonzero(keep))
        if xi == 0:
            break
        fs.append(f[keep].copy())
        Us.append(U[:, keep].copy())
    return DFRep(
        n_spatial=rep.n_spatial, fs=tuple(fs), Us=tuple(Us), threshold=float(threshold)
    )


def lambda_df(rep: DFRep, Tprime: np.ndarray) -> LambdaReport:
    """Induced 1-norm of the double-factorized encoding.

    Basis rotations let the one-body part use the Schatten 1-norm of T'
    rather than the entrywise norm; the two-body part is
    (1/4) sum_l (sum_m |f_m^l|)^2 over the retained spectra.
    """
    lam_one = float(np.sum(np.abs(np.linalg.eigvalsh(Tprime))))
    lam_two = 0.25 * float(sum(np.sum(np.abs(f)) ** 2 for f in rep.fs))
    return LambdaReport(
        method="df",
        lambda_one=lam_one,
        lambda_two=lam_two,
        provenance={
            "threshold": rep.threshold,
            "L": rep.L,
            "Xi_total": rep.Xi_total,
            "Xi_avg": rep.Xi_avg,
        },
    )


def thc_reconstruct(rep: THCRep) -> np.ndarray:
    """Assemble G_pqrs from the factors.

    Works through the (n^2, M) intermediate so the cost is O(n^2 M^2 + n^4 M),
    never materializing an (M, n^4) object.
    """
    n, M = rep.chi.shape
    E = (rep.chi[:, None, :] * rep.chi[None, :, :]).reshape(n * n, M)
    tmp = E @ rep.zeta
    return (tmp @ E.T).reshape(n, n, n, n)


def lambda_thc(rep: THCRep, data: IntegralData) -> LambdaReport:
    """Induced 1-norm of the hypercontraction encoding.

    The one-body part diagonalizes T' built from the exact V; the two-body
    part is (1/2) sum_{mu,nu} |zeta|.
    """
    Tprime = compute_T(data).Tprime
    lam_one = float(np.sum(np.abs(np.linalg.eigvalsh(Tprime))))
    lam_two = 0.5 * float(np.sum(np.abs(rep.zeta)))
    return LambdaReport(
        method="thc",
        lambda_one=lam_one,
        lambda_two=lam_two,
        provenance={"M": rep.M},
    )


def lambda_thc_naive(rep: THCRep) -> float:
    """Triangle-inequality bound sum |zeta_mn| (sum_p |chi_p^m|)^2 (sum_r |chi_r^n|)^2.

    Evaluated in factorized form; never expands the n^4 tensor.  Always at
    least twice the two-body lambda of :func:`lambda_thc` because unit-2-norm
    columns have 1-norm >= 1.
    """
    c2 = np.sum(np.abs(rep.chi), axis=0) ** 2
    return float(c2 @ np.abs(rep.zeta) @ c2)


def reconstruction_errors(V: np.ndarray, approx: np.ndarray):
    """Coherent and incoherent error norms of an approximated tensor.

    Returns (sum |V - approx|, sqrt(sum (V - approx)^2)), both over all n^4
    entries.
    """
    diff = np.asarray(V, dtype=float) - np.asarray(approx, dtype=float)
    return float(np.sum(np.abs(diff))), float(np.sqrt(np.sum(diff * diff)))


def encoded_terms(rep, Tprime: np.ndarray) -> EncodedOperator:
    """Effective one-body matrix, two-body tensor, and identity shift.

    These are the terms the walk operator for the given representation
    actually encodes; :mod:`ftqc.verify` diagonalizes them to confirm the
    lambda bound.  The two-body contraction that each encoding absorbs into
    its one-body part is subtracted here, and the discarded identity
    component appears as the scalar shift.
    """
    Tprime = np.asarray(Tprime, dtype=float)
    trace = float(np.trace(Tprime))
    if isinstance(rep, SparseRep):
        Vt = rep.dense()
        B = np.einsum("pqrr->pq", Vt)
        shift = trace - 0.5 * float(np.einsum("pprr->", Vt))
        return EncodedOperator(one_body=Tprime - B, two_body=Vt, shift=shift)
    if isinstance(rep, (SFRep, DFRep)):
        Ws = rep.W_list() if isinstance(rep, DFRep) else list(rep.Ws)
        n = rep.n_spatial
        Vrec = np.zeros((n, n, n, n))
        D = np.zeros((n, n))
        trace_sq = 0.0
        for W in Ws:
            Vrec += np.einsum("pq,rs->pqrs", W, W)
            tw = float(np.trace(W))
            D += tw * W
            trace_sq += tw * tw
        # Each squared one-body factor is PSD, so the walk encodes it centered:
        # the half-range lambda_two joins the discarded identity.  The norm is
        # entrywise when the factor is prepared in the computational basis (SF)
        # and Schatten when it is prepared in its eigenbasis (DF).
        if isinstance(rep, DFRep):
            lam_two = 0.25 * float(sum(np.sum(np.abs(f)) ** 2 for f in rep.fs))
        else:
            lam_two = 0.25 * float(sum(np.sum(np.abs(W)) ** 2 for W in Ws))
        shift = trace - 0.5 * trace_sq + lam_two
        return EncodedOperator(one_body=Tprime - D, two_body=Vrec, shift=shift)
    if isinstance(rep, THCRep):
        G = thc_reconstruct(rep)
        c2 = np.sum(rep.chi * rep.chi, axis=0)
        B = np.einsum("pm,qm,m->pq", rep.chi, rep.chi, rep.zeta @ c2)
        shift = trace - 0.5 * float(c2 @ rep.zeta @ c2)
        return EncodedOperator(one_body=Tprime - B, two_body=G, shift=shift)
    raise TypeError(f"unknown representation type {type(rep).__name__}")


def lambda_report(rep, data: IntegralData) -> LambdaReport:
    """Dispatch to the representation's lambda computation."""
    Tprime = compute_T(data).Tprime
    if isinstance(rep, SparseRep):
        return lambda_sparse(rep, Tprime)
    if isinstance(rep, SFRep):
        return lambda_sf(rep, Tprime)
    if isinstance(rep, DFRep):
        return lambda_df(rep, Tprime)
    if isinstance(rep, THCRep):
        return lambda_thc(rep, data)
    raise TypeError(f"unknown representation type {type(rep).__name__}")


def rep_to_dict(rep, lam: LambdaReport | None = None, metadata: dict | None = None) -> dict:
    """Serialize a representation to a JSON-ready dict (row-major arrays)."""
    out: dict = {"schema": SCHEMA_VERSION}
    if isinstance(rep, SparseRep):
        out.update(
            kind="sparse",
            n_spatial=rep.n_spatial,
            threshold=rep.threshold,
            d=rep.d,
            entries=[[p, q, r, s, v] for p, q, r, s, v in rep.entries],
        )
    elif isinstance(rep, SFRep):
        out.update(
            kind="sf",
            n_spatial=rep.n_spatial,
            L=rep.L,
            Ws=[W.tolist() for W in rep.Ws],
        )
    elif isinstance(rep, DFRep):
        out.update(
            kind="df",
            n_spatial=rep.n_spatial,
            threshold=rep.threshold,
            L=rep.L,
            Xi_total=rep.Xi_total,
            Xi_avg=rep.Xi_avg,
            fs=[f.tolist() for f in rep.fs],
            Us=[U.tolist() for U in rep.Us],
        )
    elif isinstance(rep, THCRep):
        out.update(
            kind="thc",
            n_spatial=rep.n_spatial,
            M=rep.M,
            chi=rep.chi.tolist(),
            zeta=rep.zeta.tolist(),
        )
    else:
        raise TypeError(f"unknown representation type {type(rep).__name__}")
    if lam is not None:
        out["lambda"] = lam.to_dict()
    if metadata:
        out["metadata"] = dict(metadata)
    return out


def rep_from_dict(payload: dict):
    """Inverse of :func:`rep_to_dict`."""
    kind = payload.get("kind")
    if kind == "sparse":
        entries = tuple(
            (int(p), int(q), int(r), int(s), float(v))
            for p, q, r, s, v in payload["entries"]
        )
        return SparseRep(
            n_spatial=int(payload["n_spatial"]),
            entries=entries,
            threshold=float(payload["threshold"]),
            d=int(payload["d"]),
        )
    if kind == "sf":
        return SFRep(
            n_spatial=int(payload["n_spatial"]),
            Ws=tuple(np.asarray(W, dtype=float) for W in payload["Ws"]),
        )
    if kind == "df":
        return DFRep(
            n_spatial=int(payload["n_spatial"]),
            fs=tuple(np.asarray(f, dtype=float) for f in payload["fs"]),
            Us=tuple(np.asarray(U, dtype=float) for U in payload["Us"]),
            threshold=float(payload["threshold"]),
        )
    if kind == "thc":
        return THCRep(
            chi=np.asarray(payload["chi"], dtype=float),
            zeta=np.asarray(payload["zeta"], dtype=float),
        )
    raise ValueError(f"unknown representation kind {kind!r}")


def save_rep(rep, path, lam: LambdaReport | None = None, metadata: dict | None = None):
    with open(path, "w") as fh:
        json.dump(rep_to_dict(rep, lam, metadata), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_rep(path):
    with open(path) as fh:
        return rep_from_dict(json.load(fh))
