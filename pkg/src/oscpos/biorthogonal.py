"""Moment matrices and biorthogonal systems for the oscillatory weight.

The pairing of z^{p+dk} against z^{p+dl} with weight |z|^{... } e^{-|z|^2}
times the oscillatory factor reduces, after the angular integral, to a
one-dimensional Hankel-Gaussian transform of integer order |k-l|. Entries
here are real in the phase normal form: a complex coupling t = tau e^{i psi}
only twists entry (k, l) by e^{-i psi (k-l)}, a twist that cancels in every
determinant, so matrices are computed at tau = |t| and the phase is carried
as metadata.

Filtration by degree mod d block-diagonalizes the full Gram matrix of the
monomial basis (the angular integral kills cross-residue couplings), and a
pivotless LDU factorization of each block yields the biorthogonal pair of
polynomial families together with their graded norms h_k.
"""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpf, mpc

from .precision_numerics import (
    PrecisionValue,
    SignCertificate,
    certified_det,
    precision_cap,
)
from .positivity_lab import PositivityVerdict
from .fp_kernel import hankel_gaussian_transform

__all__ = [
    "DegenerateFiltration",
    "MomentMatrix",
    "BiorthogonalSystem",
    "FullGramReport",
    "normalize_coupling",
    "moment_entry",
    "moment_matrix",
    "leading_minors",
    "twisted_det",
    "biorthogonalize",
    "full_gram",
]


class DegenerateFiltration(RuntimeError):
    """A factorization pivot could not be certified away from zero."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


def normalize_coupling(t):
    """Split a coupling parameter into modulus tau >= 0 and phase psi."""
    tv = mpc(t) if isinstance(t, complex) else _to_mp(t)
    if isinstance(tv, mpc):
        if tv.imag == 0:
            tv = tv.real
        else:
            return abs(tv), mp.atan2(tv.imag, tv.real)
    if tv < 0:
        return -tv, +mp.pi
    return tv, mpf(0)


def _to_mp(t):
    return t if isinstance(t, (mpf, mpc)) else (mpc(t) if isinstance(t, complex) else mpf(t))


def moment_entry(d: int, p: int, k: int, l: int, t, tol=mpf("1e-25"),
                 precision: int | None = None) -> PrecisionValue:
    """Entry I_{k,l} of the moment matrix in phase normal form (t real >= 0).

    Real value: the angular integral leaves a single Bessel transform of
    order |k-l| whose sign bookkeeping is +1 for l >= k and (-1)^{k-l}
    otherwise. Entries with k = l at t = 0 reduce to Gaussian moments
    pi * Gamma(p + dk + 1).
    """
    if not (0 <= p < d):
        raise ValueError("p must satisfy 0 <= p <= d-1")
    if k < 0 or l < 0:
        raise ValueError("indices must be nonnegative")
    t = mpf(t)
    if t < 0:
        raise ValueError("normal form requires t >= 0; use normalize_coupling")
    nu = abs(k - l)
    rpow = 2 * p + d * (k + l) + 1
    sgn = 1 if l >= k else (-1) ** (k - l)
    v, e = hankel_gaussian_transform(d, rpow, nu, t, tol=mpf(tol), precision=precision)
    digits = max(30, int(-mp.log10(mpf(tol))) + 15)
    with mp.workdps(digits):
        pi_pv = PrecisionValue(+mp.pi, mpf(10) ** (-digits + 2))
        return PrecisionValue(v, e) * pi_pv * PrecisionValue.exact(2 * sgn)


@dataclass(frozen=True)
class MomentMatrix:
    """Moment matrix of one residue class, stored in phase normal form."""

    d: int
    p: int
    size: int
    tau: object
    psi: object
    entries: tuple
    hermitian_residual: object

    def entry(self, k: int, l: int) -> PrecisionValue:
        return self.entries[k][l]

    def twisted(self) -> list:
        """Rows scaled so positivity of the underlying form becomes det > 0
        of the plain matrix; column l picks up (-1)^l."""
        return [[-self.entries[k][l] if l % 2 else self.entries[k][l]
                 for l in range(self.size)] for k in range(self.size)]

    def rotated_entries(self) -> list:
        """Entries at the original complex coupling tau e^{i psi}."""
        if self.psi == 0:
            return [list(row) for row in self.entries]
        out = []
        with mp.workdps(mp.dps + 10):
            for k in range(self.size):
                row = []
                for l in range(self.size):
                    phase = mp.exp(mpc(0, -self.psi * (k - l)))
                    row.append(self.entries[k][l] * PrecisionValue(phase, mpf(10) ** (-mp.dps + 2)))
                out.append(row)
        return out


def moment_matrix(d: int, p: int, N: int, t, tol=mpf("1e-25"),
                  precision: int | None = None) -> MomentMatrix:
    """N x N moment matrix for residue class p at coupling t.

    Complex or negative t is normalized to tau = |t| with the phase recorded;
    determinants are unchanged by the normalization. Entries below the
    diagonal follow from those above by the exact sign-twisted symmetry
    I_{l,k} = (-1)^{k-l} I_{k,l}, and the stored matrix is re-audited against
    that identity (the residual reported is computed from the stored values).
    """
    if N < 1:
        raise ValueError("size must be at least 1")
    tau, psi = normalize_coupling(t)
    grid = [[None] * N for _ in range(N)]
    for k in range(N):
        for l in range(k, N):
            grid[k][l] = moment_entry(d, p, k, l, tau, tol=tol, precision=precision)
    for k in range(N):
        for l in range(k):
            base = grid[l][k]
            grid[k][l] = -base if (k - l) % 2 else base
    residual = mpf(0)
    scale = max(x.abs_upper() for row in grid for x in row)
    with mp.workdps(40):
        for k in range(N):
            for l in range(N):
                twist = mpf((-1) ** (k - l))
                gap = abs(grid[k][l].value - twist * grid[l][k].value)
                residual = max(residual, gap / scale if scale > 0 else gap)
    return MomentMatrix(d, p, N, tau, psi,
                        tuple(tuple(row) for row in grid), residual)


def leading_minors(M: MomentMatrix) -> list[PositivityVerdict]:
    """Certified leading principal minors of the moment matrix itself."""
    out = []
    for m in range(1, M.size + 1):
        block = [list(M.entries[k][:m]) for k in range(m)]
        det, sign = certified_det(block)
        out.append(PositivityVerdict(
            det, sign, f"moment minor m={m} d={M.d} p={M.p} tau={mp.nstr(M.tau, 8)}"))
    return out


def twisted_det(M: MomentMatrix, m: int | None = None) -> PositivityVerdict:
    """Certified determinant of the column-alternating convention.

    det of [(-1)^l I_{k,l}] differs from det of [I_{k,l}] by the fixed factor
    (-1)^{0+1+...+(m-1)}, so its sign flips exactly when m = 2, 3 (mod 4).
    """
    m = M.size if m is None else m
    block = [[-M.entries[k][l] if l % 2 else M.entries[k][l] for l in range(m)]
             for k in range(m)]
    det, sign = certified_det(block)
    return PositivityVerdict(
        det, sign, f"twisted minor m={m} d={M.d} p={M.p} tau={mp.nstr(M.tau, 8)}")


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Pivotless LDU output: paired polynomial families and graded norms.

    p_coeffs[k][j] multiplies z^{p+dj} in the k-th left polynomial; q_coeffs
    likewise for the right family. h[k] are the graded norms (the LDU
    pivots), and residual bounds max |<p_k, q_l> - delta_{kl} h_k| as
    recomputed from the stored coefficients and moments.
    """

    d: int
    p: int
    size: int
    tau: object
    p_coeffs: tuple
    q_coeffs: tuple
    h: tuple
    residual: object


def biorthogonalize(M: MomentMatrix) -> BiorthogonalSystem:
    """Factor the moment matrix as L D U (unit triangular, no pivoting).

    The monic left family has coefficient rows L^{-1}; the right family is
    the conjugate-transposed inverse of U. Raises DegenerateFiltration at the
    first pivot whose certified interval touches zero, since reordering would
    break the degree filtration.
    """
    N = M.size
    dps = _ldu_working_dps(M)
    with mp.workdps(dps):
        L = [[PrecisionValue.exact(1 if i == j else 0) for j in range(N)] for i in range(N)]
        U = [[PrecisionValue.exact(1 if i == j else 0) for j in range(N)] for i in range(N)]
        D = []
        for k in range(N):
            acc = M.entries[k][k]
            for m in range(k):
                acc = acc - L[k][m] * D[m] * U[m][k]
            if acc.sign_certificate() is SignCertificate.INDETERMINATE:
                raise DegenerateFiltration(
                    f"pivot {k} not certified nonzero "
                    f"(d={M.d} p={M.p} tau={mp.nstr(M.tau, 8)})", index=k)
            D.append(acc)
            for i in range(k + 1, N):
                s = M.entries[i][k]
                for m in range(k):
                    s = s - L[i][m] * D[m] * U[m][k]
                L[i][k] = s / acc
                s = M.entries[k][i]
                for m in range(k):
                    s = s - L[k][m] * D[m] * U[m][i]
                U[k][i] = s / acc
        A = _unit_lower_inverse(L)
        Uinv = _unit_upper_inverse(U)
        B = [[Uinv[j][i].conjugate() for j in range(N)] for i in range(N)]
        residual = _pairing_residual(M, A, B, D)
    return BiorthogonalSystem(M.d, M.p, N, M.tau,
                              tuple(tuple(r) for r in A),
                              tuple(tuple(r) for r in B),
                              tuple(D), residual)


def _ldu_working_dps(M: MomentMatrix) -> int:
    errs = [x.err for row in M.entries for x in row if x.err > 0]
    dps = max(mp.dps, 30)
    if errs:
        with mp.workdps(30):
            tight = min(errs)
            if tight < 1:
                dps = max(dps, min(int(-mp.log10(tight)) + 10, precision_cap()))
    return dps + M.size


def _unit_lower_inverse(L):
    n = len(L)
    inv = [[PrecisionValue.exact(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            s = PrecisionValue.exact(0)
            for m in range(j, i):
                s = s + L[i][m] * inv[m][j]
            inv[i][j] = -s
    return inv


def _unit_upper_inverse(U):
    n = len(U)
    flipped = [[U[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]
    inv_f = _unit_lower_inverse(flipped)
    return [[inv_f[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]


def _pairing_residual(M: MomentMatrix, A, B, D):
    n = M.size
    worst = mpf(0)
    for k in range(n):
        for l in range(n):
            s = PrecisionValue.exact(0)
            for a in range(k + 1):
                for b in range(l + 1):
                    s = s + A[k][a] * B[l][b].conjugate() * M.entries[a][b]
            if k == l:
                s = s - D[k]
            worst = max(worst, abs(s.value) + s.err)
    return worst


@dataclass(frozen=True)
class FullGramReport:
    """Degree-filtered Gram analysis of the full monomial basis.

    The basis z^0 .. z^{N_deg} splits by degree mod d into blocks; cross
    blocks vanish identically. degree_minors are the certified leading
    minors of the degree-ordered full matrix, and block_factor_discrepancy
    bounds their deviation from the product of truncated block minors.
    """

    d: int
    N_deg: int
    tau: object
    psi: object
    block_sizes: tuple
    blocks: tuple
    systems: tuple
    degree_minors: tuple
    block_factor_discrepancy: object
    nondegenerate: bool


def full_gram(d: int, N_deg: int, t, tol=mpf("1e-25"),
              precision: int | None = None) -> FullGramReport:
    """Gram analysis of monomials up to degree N_deg at coupling t."""
    if N_deg < 0:
        raise ValueError("N_deg must be nonnegative")
    tau, psi = normalize_coupling(t)
    sizes = tuple(((N_deg - r) // d) + 1 if r <= N_deg else 0 for r in range(d))
    blocks = []
    systems = []
    for r in range(d):
        if sizes[r] == 0:
            blocks.append(None)
            systems.append(None)
            continue
        Mb = moment_matrix(d, r, sizes[r], tau, tol=tol, precision=precision)
        blocks.append(Mb)
        systems.append(biorthogonalize(Mb))

    n = N_deg + 1
    zero = PrecisionValue.exact(0)
    G = [[zero] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a % d == b % d:
                r = a % d
                G[a][b] = blocks[r].entries[a // d][b // d]

    minors = []
    worst_gap = mpf(0)
    for m in range(1, n + 1):
        det, sign = certified_det([row[:m] for row in G[:m]])
        minors.append(PositivityVerdict(det, sign, f"degree minor m={m}"))
        with mp.workdps(60):
            prod = PrecisionValue.exact(1)
            for r in range(d):
                c = sum(1 for a in range(m) if a % d == r)
                if c == 0:
                    continue
                bdet, _ = certified_det([list(blocks[r].entries[k][:c]) for k in range(c)])
                prod = prod * bdet
            gap = abs(det.value - prod.value)
            allow = det.err + prod.err
            worst_gap = max(worst_gap, gap - allow if gap > allow else mpf(0))

    nondeg = all(v.sign is not SignCertificate.INDETERMINATE for v in minors)
    return FullGramReport(d, N_deg, tau, psi, sizes, tuple(blocks), tuple(systems),
                          tuple(minors), worst_gap, nondeg)
