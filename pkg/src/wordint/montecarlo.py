"""Haar sampling on O(n) and Sp(n) and Monte Carlo estimates of trace integrals.

Samples are drawn in fixed-size chunks; chunk ``c`` uses a Philox stream
seeded by ``(seed, c)``, so a report depends only on the seed and the sample
count, never on how chunks are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .freegroup import Word, render

MEMBERSHIP_TOL = 1e-10
Z_THRESHOLD = 4.0
CHUNK = 5000
CHECK_EVERY = 100  # one membership check per this many draws


class MembershipError(ArithmeticError):
    pass


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2 ** 64 - 1), chunk])))


def symplectic_form(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def haar_orthogonal_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` Haar orthogonal matrices: QR of Gaussian matrices with the
    signs of ``diag(R)`` moved into ``Q``."""
    if n < 1:
        raise ValueError("n must be positive")
    z = rng.standard_normal((size, n, n))
    q, r = np.linalg.qr(z)
    d = np.sign(np.diagonal(r, axis1=1, axis2=2))
    d[d == 0] = 1.0
    return q * d[:, None, :]


def haar_symplectic_batch(n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` Haar elements of Sp(n) as ``2n x 2n`` complex matrices.

    Column ``j`` is a complex Gaussian vector orthogonalised against the
    columns already chosen and normalised; column ``j + n`` is then
    ``-J conj(column j)``.  The span of the chosen columns is closed under
    ``v -> J conj(v)``, so each new column is uniform on the unit sphere of
    a quaternionic subspace, which gives Haar measure.
    """
    if n < 1:
        raise ValueError("n must be positive")
    m = 2 * n
    J = symplectic_form(n)
    A = np.zeros((size, m, m), dtype=complex)
    g = (rng.standard_normal((size, m, n)) + 1j * rng.standard_normal((size, m, n))) / math.sqrt(2)
    for j in range(n):
        v = g[:, :, j]
        for cols in (A[:, :, :j], A[:, :, n:n + j]):
            if j:
                coeff = np.einsum("bij,bi->bj", cols.conj(), v)
                v = v - np.einsum("bij,bj->bi", cols, coeff)
        v = v / np.linalg.norm(v, axis=1)[:, None]
        A[:, :, j] = v
        A[:, :, j + n] = -(J @ v.conj().T).T
    return A


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    return haar_orthogonal_batch(n, 1, rng)[0]


def haar_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    return haar_symplectic_batch(n, 1, rng)[0]


def orthogonal_residual(A: np.ndarray) -> float:
    return float(np.max(np.abs(A.T @ A - np.eye(A.shape[0]))))


def symplectic_residuals(A: np.ndarray) -> tuple[float, float]:
    """``(||A* A - I||_max, ||A J A^T - J||_max)``."""
    m = A.shape[0]
    J = symplectic_form(m // 2)
    return (float(np.max(np.abs(A.conj().T @ A - np.eye(m)))),
            float(np.max(np.abs(A @ J @ A.T - J))))


def inverse_entry_residual(A: np.ndarray) -> float:
    """Largest deviation from ``(A^-1)_{ij} = xi(i) xi(j) A_{j^, i^}``."""
    m = A.shape[0]
    n = m // 2
    xi = np.array([1.0] * n + [-1.0] * n)
    hat = np.array(list(range(n, m)) + list(range(n)))
    predicted = np.outer(xi, xi) * A[np.ix_(hat, hat)].T
    return float(np.max(np.abs(np.linalg.inv(A) - predicted)))


@dataclass(frozen=True)
class SampleSpec:
    group: str
    n: int
    samples: int
    seed: int

    def __post_init__(self):
        if self.group not in ("O", "Sp"):
            raise ValueError(f"group must be O or Sp, not {self.group!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.samples < 100:
            raise ValueError("at least 100 samples are required")


@dataclass(frozen=True)
class EstimateReport:
    group: str
    n: int
    samples: int
    seed: int
    mean: float
    std_error: float
    exact: Fraction
    z: float
    workers: int = 1
    tolerance: float = MEMBERSHIP_TOL

    @property
    def exact_value(self) -> Fraction:
        return self.exact

    @property
    def z_score(self) -> float:
        return self.z

    def passes(self, threshold: float = Z_THRESHOLD) -> bool:
        return abs(self.z) < threshold

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["exact"] = str(self.exact)
        return doc


def _sample_group(group: str, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
    if group == "O":
        return haar_orthogonal_batch(n, size, rng)
    return haar_symplectic_batch(n, size, rng)


def _check_membership(group: str, mats: np.ndarray) -> None:
    for A in mats[::CHECK_EVERY]:
        if group == "O":
            res = orthogonal_residual(A)
        else:
            res = max(symplectic_residuals(A))
        if res > MEMBERSHIP_TOL:
            raise MembershipError(f"sampled matrix has residual {res:.3g}")


def _evaluate(word: Word, mats: dict[int, np.ndarray], invs: dict[int, np.ndarray]) -> np.ndarray:
    letters = word.letters
    out = None
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        x = letters[i]
        base = mats[x] if x > 0 else invs[-x]
        power = np.linalg.matrix_power(base, j - i)
        out = power if out is None else out @ power
        i = j
    return out


def _chunk_values(words: tuple[Word, ...], group: str, n: int, size: int, seed: int, chunk: int) -> np.ndarray:
    rng = _rng(seed, chunk)
    gens = sorted({abs(x) for w in words for x in w.letters})
    mats = {}
    invs = {}
    for g in gens:
        A = _sample_group(group, n, size, rng)
        _check_membership(group, A)
        mats[g] = A
        invs[g] = np.swapaxes(A, 1, 2) if group == "O" else np.swapaxes(A, 1, 2).conj()
    dim = n if group == "O" else 2 * n
    values = np.ones(size)
    for w in words:
        if not w:
            values = values * dim
            continue
        tr = np.trace(_evaluate(w, mats, invs), axis1=1, axis2=2)
        values = values * np.real(tr)
    return values


def sample_values(words: Sequence[Word], spec: SampleSpec, workers: int = 1) -> np.ndarray:
    """The per-sample products of traces, in a worker-independent order."""
    words = tuple(words)
    sizes = [CHUNK] * (spec.samples // CHUNK)
    if spec.samples % CHUNK:
        sizes.append(spec.samples % CHUNK)
    args = [(words, spec.group, spec.n, size, spec.seed, c) for c, size in enumerate(sizes)]
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_values, *zip(*args)))
    else:
        parts = [_chunk_values(*a) for a in args]
    return np.concatenate(parts)


def estimate(words: Sequence[Word], spec: SampleSpec, exact: Fraction | None = None,
             workers: int = 1) -> EstimateReport:
    """Monte Carlo mean of ``prod_k tr(w_k(g_1, ..., g_r))`` with its z-score against the exact value."""
    words = tuple(words)
    if exact is None:
        from .integrals import evaluate_exact

        exact = evaluate_exact(words, spec.group, spec.n)
    values = sample_values(words, spec, workers)
    count = len(values)
    mean = math.fsum(values) / count
    var = math.fsum((values - mean) ** 2) / (count - 1)
    se = math.sqrt(var / count)
    diff = mean - float(exact)
    if se > 0:
        z = diff / se
    else:
        z = 0.0 if abs(diff) < 1e-9 else math.copysign(math.inf, diff)
    return EstimateReport(spec.group, spec.n, spec.samples, spec.seed, mean, se, Fraction(exact), z, workers)


def describe(words: Sequence[Word], report: EstimateReport) -> str:
    label = ", ".join(render(w) for w in words)
    return (f"{report.group}({report.n}) [{label}]: mean={report.mean:.6f} se={report.std_error:.6f} "
            f"exact={report.exact} ({float(report.exact):.6f}) z={report.z:+.2f}")
