r"""Axial translation matrices for vector multipole waves at imaginary frequency.

For two centres separated by a distance d along a common z-axis the
translation operator is block-diagonal in the azimuthal index m.  Within an
m-block the couplings between normalized vector multipoles (l, P) and
(l', P') reduce to single sums over modified spherical Bessel functions
``k_p(kappa d)`` weighted by Wigner-3j products:

.. math::
    U^{PP}_{l l'} &= \mathrm{pref}(l,l') \sum_p (2p+1)
        \bigl[\Lambda - p(p+1)\bigr]
        \begin{pmatrix} l & l' & p \\ m & -m & 0\end{pmatrix}
        \begin{pmatrix} l & l' & p \\ 0 & 0 & 0\end{pmatrix} k_p(x), \\
    U^{P\bar P}_{l l'} &= \mathrm{pref}(l,l') \sum_p (2p+1)
        \sqrt{(\Sigma^2-p^2)(p^2-\Delta^2)}
        \begin{pmatrix} l & l' & p \\ m & -m & 0\end{pmatrix}
        \begin{pmatrix} l & l' & p-1 \\ 0 & 0 & 0\end{pmatrix} k_p(x),

with ``Lambda = l(l+1) + l'(l'+1)``, ``Sigma = l+l'+1``, ``Delta = l-l'``
and ``pref = -(-1)^m \sqrt{(2l+1)(2l'+1) / (l(l+1) l'(l'+1))} / pi``.

The polarization-preserving coupling is identical for M->M and E->E, the
polarization-mixing coupling identical for M->E and E->M; for -m the mixing
sector flips sign.  The reverse translation is obtained from the parity
operator D = diag((-1)^{l+1}) on M channels and diag((-1)^l) on E channels
as ``U21 = D U12 D``.

The normalization and sign convention of this block is pinned operationally
by the dipole sector: together with the dipole T-matrix elements it must
reproduce the closed-form two-dipole round-trip trace (see
:func:`dipole_translation_limit` and the round-trip module).

Wigner symbols with the (m, -m, 0) magnetic structure are generated by the
three-term recurrence in p, run upward and downward with renormalisation
and glued at the magnitude maximum; (0,0,0) symbols use the cancellation-free
closed form.  Exactness is checked against rational-arithmetic symbols in
the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from . import specfun

__all__ = [
    "TranslationBlock",
    "translation_block",
    "dipole_translation_limit",
    "DipoleCouplings",
    "coupling_tensors",
    "parity_signs",
]


def wigner3j_000(l1: np.ndarray, l2: np.ndarray, l3: np.ndarray) -> np.ndarray:
    """Wigner 3j symbol with all magnetic numbers zero (vectorised).

    Uses the single-term closed form (no alternating sum, so no
    cancellation); zero whenever l1+l2+l3 is odd or the triangle rule
    fails.
    """
    l1 = np.asarray(l1, dtype=np.int64)
    l2 = np.asarray(l2, dtype=np.int64)
    l3 = np.asarray(l3, dtype=np.int64)
    J = l1 + l2 + l3
    ok = ((J % 2 == 0) & (l3 >= np.abs(l1 - l2)) & (l3 <= l1 + l2)
          & (l1 >= 0) & (l2 >= 0) & (l3 >= 0))
    s = np.where(ok, J // 2, 0)
    a = np.where(ok, s - l1, 0)
    b = np.where(ok, s - l2, 0)
    c = np.where(ok, s - l3, 0)
    logw = (0.5 * (gammaln(2 * a + 1) + gammaln(2 * b + 1) + gammaln(2 * c + 1)
                   - gammaln(J + 2))
            + gammaln(s + 1) - gammaln(a + 1) - gammaln(b + 1) - gammaln(c + 1))
    sign = np.where(s % 2 == 0, 1.0, -1.0)
    return np.where(ok, sign * np.exp(logw), 0.0)


def _wigner3j_mseq(m: int, l: np.ndarray, lp: np.ndarray,
                   p_len: int) -> np.ndarray:
    """Wigner symbols (l, l', p; m, -m, 0) for p = 0..p_len-1, all pairs.

    ``l`` and ``lp`` are flat arrays of equal length; the result has shape
    (len(l), p_len).  m must be >= 1 (m = 0 is served by the closed form).
    Two-sided recurrence with per-pair renormalisation, glued at the
    magnitude maximum of the downward sweep, normalised by
    ``sum_p (2p+1) f(p)^2 = 1`` and the sign of f(p_max) = (-1)^{l-l'}.
    """
    if m < 1:
        raise ValueError("recurrence path requires m >= 1")
    l = np.asarray(l, dtype=float)
    lp = np.asarray(lp, dtype=float)
    npair = l.shape[0]
    delta = l - lp
    sigma = l + lp + 1.0
    pmin = np.abs(delta).astype(np.int64)
    pmax = (l + lp).astype(np.int64)
    ps = np.arange(p_len, dtype=float)

    # a(p) = sqrt((p^2 - Delta^2)(Sigma^2 - p^2)), clipped outside triangle
    def a_of(pvals):
        arg = (pvals**2 - delta**2) * (sigma**2 - pvals**2)
        return np.sqrt(np.maximum(arg, 0.0))

    def sweep(up: bool):
        logf = np.full((npair, p_len), -np.inf)
        sgn = np.zeros((npair, p_len))
        f_prev = np.zeros(npair)   # f at previous p (direction-wise)
        f_cur = np.zeros(npair)
        off = np.zeros(npair)
        if up:
            rng = range(0, p_len)
        else:
            rng = range(p_len - 1, -1, -1)
        for p in rng:
            pv = float(p)
            if up:
                seed = pmin == p
                step = (p > pmin) & (p <= pmax)
            else:
                seed = pmax == p
                step = (p < pmax) & (p >= pmin)
            newf = np.zeros(npair)
            if np.any(step):
                if up:
                    # recurrence centred at p-1 gives f(p) from f(p-1), f(p-2)
                    a_here = a_of(np.full(npair, pv))
                    a_back = a_of(np.full(npair, pv - 1.0))
                    num = 2.0 * m * (2.0 * (pv - 1.0) + 1.0) * f_cur - a_back * f_prev
                else:
                    # recurrence centred at p+1 gives f(p) from f(p+1), f(p+2)
                    a_here = a_of(np.full(npair, pv + 1.0))
                    a_back = a_of(np.full(npair, pv + 2.0))
                    num = 2.0 * m * (2.0 * (pv + 1.0) + 1.0) * f_cur - a_back * f_prev
                with np.errstate(divide="ignore", invalid="ignore"):
                    cand = num / a_here
                newf = np.where(step, cand, 0.0)
            newf = np.where(seed, 1.0, newf)
            f_prev, f_cur = np.where(seed, 0.0, f_cur), newf
            big = np.abs(f_cur) > 1e250
            if np.any(big):
                f_cur = np.where(big, f_cur * 1e-300, f_cur)
                f_prev = np.where(big, f_prev * 1e-300, f_prev)
                off = np.where(big, off + 300.0 * math.log(10.0), off)
            live = seed | (step if isinstance(step, np.ndarray) else np.zeros(npair, bool))
            nz = live & (f_cur != 0.0)
            logf[nz, p] = np.log(np.abs(f_cur[nz])) + off[nz]
            sgn[nz, p] = np.sign(f_cur[nz])
        return logf, sgn

    logf_u, sgn_u = sweep(up=True)
    logf_d, sgn_d = sweep(up=False)

    # glue at the magnitude maximum of the downward sweep
    pstar = np.argmax(np.where(np.isfinite(logf_d), logf_d, -np.inf), axis=1)
    idx = np.arange(npair)
    c_log = logf_d[idx, pstar] - logf_u[idx, pstar]
    c_sgn = sgn_d[idx, pstar] * sgn_u[idx, pstar]
    use_up = ps[None, :] <= pstar[:, None]
    logf = np.where(use_up, logf_u + c_log[:, None], logf_d)
    sgn = np.where(use_up, sgn_u * c_sgn[:, None], sgn_d)

    # normalise: sum_p (2p+1) f^2 = 1
    mmax = np.max(np.where(np.isfinite(logf), logf, -np.inf), axis=1)
    w2 = np.where(np.isfinite(logf), (2.0 * ps[None, :] + 1.0)
                  * np.exp(2.0 * (logf - mmax[:, None])), 0.0)
    lognorm = mmax + 0.5 * np.log(np.sum(w2, axis=1))
    logf = logf - lognorm[:, None]

    # overall sign: f(pmax) has sign (-1)^{l-l'}
    want = np.where(np.abs(delta).astype(np.int64) % 2 == 0, 1.0, -1.0)
    have = sgn[idx, pmax]
    flip = np.where(have * want < 0, -1.0, 1.0)
    sgn = sgn * flip[:, None]

    vals = np.where(np.isfinite(logf), sgn * np.exp(logf), 0.0)
    return vals


def coupling_tensors(m: int, l0: int, l_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-m coupling tensors (GA, GB) of shape (n, n, p_len).

    ``n = l_max - l0 + 1`` spans l = l0..l_max and ``p_len = 2 l_max + 2``.
    The polarization-preserving block of the translation matrix is
    ``sum_p GA[i,j,p] k_p(x)`` and the mixing block ``sum_p GB[i,j,p] k_p(x)``;
    the channel prefactor is folded in.  Small tensors are memoised (they
    are frequency independent and dominate the cost of repeated
    single-frequency evaluations).
    """
    if l_max <= _COUPLING_CACHE_LMAX:
        return _coupling_tensors_cached(m, l0, l_max)
    return _coupling_tensors_impl(m, l0, l_max)


_COUPLING_CACHE_LMAX = 48


def _coupling_tensors_impl(m: int, l0: int, l_max: int) -> tuple[np.ndarray, np.ndarray]:
    if m < 0:
        raise ValueError("m must be >= 0 (negative m by symmetry)")
    if l0 < max(1, m) or l_max < l0:
        raise ValueError("require max(1, m) <= l0 <= l_max")
    n = l_max - l0 + 1
    p_len = 2 * l_max + 2
    ls = np.arange(l0, l_max + 1, dtype=np.int64)
    L = np.repeat(ls, n)
    Lp = np.tile(ls, n)
    ps = np.arange(p_len, dtype=np.int64)

    w000 = wigner3j_000(L[:, None], Lp[:, None], ps[None, :])
    w000_m1 = np.zeros_like(w000)
    w000_m1[:, 1:] = w000[:, :-1]

    if m == 0:
        wm = w000
    else:
        wm = _wigner3j_mseq(m, L.astype(float), Lp.astype(float), p_len)

    Lf = L.astype(float)
    Lpf = Lp.astype(float)
    lam = (Lf * (Lf + 1.0) + Lpf * (Lpf + 1.0))[:, None]
    sig = (Lf + Lpf + 1.0)[:, None]
    del_ = (Lf - Lpf)[:, None]
    pf = ps[None, :].astype(float)
    two_p1 = 2.0 * pf + 1.0

    # the destination-side sign (-1)^{l'+1} fixes the relative sign of the
    # l' channels; it is invisible to the dipole sector and to composition
    # identities (a pure Z2 gauge there) and is pinned by expanding
    # translated vector-wave fields directly (see the field-expansion test)
    dest_sign = np.where(Lp % 2 == 0, -1.0, 1.0)[:, None]
    pref = (-1.0 / math.pi) * (1.0 if m % 2 == 0 else -1.0) * dest_sign * np.sqrt(
        (2.0 * Lf + 1.0) * (2.0 * Lpf + 1.0)
        / (Lf * (Lf + 1.0) * Lpf * (Lpf + 1.0)))[:, None]

    ga = pref * two_p1 * (lam - pf * (pf + 1.0)) * wm * w000
    root = np.sqrt(np.maximum((sig**2 - pf**2) * (pf**2 - del_**2), 0.0))
    if m == 0:
        gb = np.zeros_like(ga)
    else:
        gb = pref * two_p1 * root * wm * w000_m1

    return ga.reshape(n, n, p_len), gb.reshape(n, n, p_len)


@lru_cache(maxsize=2048)
def _coupling_tensors_cached(m: int, l0: int, l_max: int):
    return _coupling_tensors_impl(m, l0, l_max)


def parity_signs(l0: int, l_max: int) -> np.ndarray:
    """Diagonal of the parity operator D over channels (M then E, l ascending).

    M multipoles carry parity (-1)^{l+1}, E multipoles (-1)^l.
    """
    ls = np.arange(l0, l_max + 1)
    d_m = np.where((ls + 1) % 2 == 0, 1.0, -1.0)
    d_e = np.where(ls % 2 == 0, 1.0, -1.0)
    return np.concatenate([d_m, d_e])


@dataclass(frozen=True)
class TranslationBlock:
    """Scaled translation matrix for one azimuthal block.

    ``entries`` is the dense matrix over channels (P, l) with P in (M, E)
    and l = l0..l_max, scaled by exp(-kappa_d): the physical matrix is
    ``entries * exp(scaling_exponent)`` with ``scaling_exponent = -kappa_d``.
    """

    m: int
    kappa_d: float
    l_max: int
    l_min: int
    entries: np.ndarray
    scaling_exponent: float

    @property
    def n_l(self) -> int:
        return self.l_max - self.l_min + 1

    def reversed(self) -> "TranslationBlock":
        """The block for the opposite translation direction, D U D."""
        d = parity_signs(self.l_min, self.l_max)
        return TranslationBlock(
            m=self.m, kappa_d=self.kappa_d, l_max=self.l_max, l_min=self.l_min,
            entries=d[:, None] * self.entries * d[None, :],
            scaling_exponent=self.scaling_exponent)


def _radial_log(p_len: int, x: float, radial: str) -> tuple[np.ndarray, np.ndarray]:
    """log|f_p(x)| and signs for the radial factor of the p-sums.

    ``radial='outgoing'`` gives k_p(x) e^{+x} (singular waves, scaled);
    ``radial='regular'`` gives i_p(x) e^{-x} (regular waves, scaled).
    """
    ps = np.arange(p_len)
    if radial == "outgoing":
        log_khat = specfun.log_khat_spherical_ladder(p_len - 1, x)
        logs = (math.log(math.pi / 2.0) + log_khat
                - (ps + 1.0) * math.log(x))
        return logs, np.ones(p_len)
    if radial == "regular":
        log_i = specfun.log_scaled_iv_ladder(p_len - 1, x)
        logs = log_i + 0.5 * (math.log(math.pi / 2.0) - math.log(x))
        return logs, np.ones(p_len)
    raise ValueError("radial must be 'outgoing' or 'regular'")


def _assemble_entries(m: int, x: float, l0: int, l_max: int,
                      radial: str = "outgoing") -> np.ndarray:
    """Full 2n x 2n scaled entry matrix of one m-block via log-domain p-sums.

    For ``radial='outgoing'`` this is the physical out-to-regular block
    scaled by e^{+x}.  For ``radial='regular'`` it is the true
    regular-to-regular block (R(0) = I): relative to the outgoing sum the
    radial rotation leaves a factor ``-(pi/2) (-1)^p``, the latter acting
    as a parity conjugation.
    """
    ga, gb = coupling_tensors(m, l0, l_max)
    p_len = ga.shape[2]
    rad_log, _ = _radial_log(p_len, x, radial)

    def signed_sum(g):
        # sum_p g[i,j,p] * exp(rad_log[p]) with max-extraction per entry
        with np.errstate(divide="ignore"):
            term_log = np.log(np.abs(g)) + rad_log[None, None, :]
        mmax = np.max(term_log, axis=2)
        finite = np.isfinite(mmax)
        out = np.zeros(mmax.shape)
        if np.any(finite):
            red = np.sum(np.sign(g) * np.exp(term_log - mmax[:, :, None]),
                         axis=2, where=np.isfinite(term_log))
            val_log = mmax + np.log(np.abs(red) + 1e-320)
            if np.any(val_log[finite] > 700.0):
                raise OverflowError(
                    "scaled translation entries overflow float64 at "
                    f"kappa_d={x:g}, l_max={l_max}; use the round-trip API")
            out[finite] = (np.sign(red) * np.exp(val_log))[finite]
        return out

    same = signed_sum(ga)
    cross = signed_sum(gb)
    top = np.hstack([same, cross])
    bot = np.hstack([cross, same])
    out = np.vstack([top, bot])
    if radial == "regular":
        d = parity_signs(l0, l_max)
        # the destination gauge sign folded into the coupling tensors must
        # be mirrored on the source side for regular-regular re-expansion
        ls = np.arange(l0, l_max + 1)
        lam = np.concatenate([np.where(ls % 2 == 0, -1.0, 1.0)] * 2)
        out = lam[:, None] * out
        out = -(math.pi / 2.0) * (d[:, None] * out * d[None, :])
        # undo the e^{-x} carried by the scaled i_p ladder: R is O(1)
        out *= math.exp(min(x, 700.0))
    return out


def translation_block(m: int, kappa_d: float, l_max: int) -> TranslationBlock:
    """Scaled translation block for azimuthal index m.

    Populates both polarization-preserving (M->M, E->E) and mixing
    (M->E, E->M) couplings for max(|m|, 1) <= l, l' <= l_max, scaled by
    exp(-kappa_d).  For m < 0 the mixing sector flips sign relative to +|m|.
    """
    if kappa_d <= 0:
        raise ValueError("kappa_d must be > 0")
    if abs(m) > l_max:
        raise ValueError(f"|m|={abs(m)} exceeds l_max={l_max}: empty block")
    l0 = max(1, abs(m))
    entries = _assemble_entries(abs(m), kappa_d, l0, l_max)
    if m < 0:
        n = l_max - l0 + 1
        entries = entries.copy()
        entries[:n, n:] *= -1.0
        entries[n:, :n] *= -1.0
    return TranslationBlock(m=m, kappa_d=kappa_d, l_max=l_max, l_min=l0,
                            entries=entries, scaling_exponent=-kappa_d)


@dataclass(frozen=True)
class DipoleCouplings:
    """Closed-form l = l' = 1 translation couplings at adimensional q = kappa*d.

    ``same_m0``, ``same_m1`` are the polarization-preserving couplings for
    m = 0 and |m| = 1; ``cross_m1`` is the mixing coupling for m = +1 (it
    flips sign for m = -1 and vanishes for m = 0).  All values carry the
    physical e^{-q} decay (unscaled).
    """

    q: float
    same_m0: float
    same_m1: float
    cross_m1: float

    def block(self, m: int) -> np.ndarray:
        """2x2 matrix over (M, E) for the requested m in {-1, 0, 1}."""
        if m == 0:
            return np.array([[self.same_m0, 0.0], [0.0, self.same_m0]])
        if m == 1:
            return np.array([[self.same_m1, self.cross_m1],
                             [self.cross_m1, self.same_m1]])
        if m == -1:
            return np.array([[self.same_m1, -self.cross_m1],
                             [-self.cross_m1, self.same_m1]])
        raise ValueError("dipole block has |m| <= 1")


def dipole_translation_limit(q: float) -> DipoleCouplings:
    """Dipole-sector couplings in closed form.

    Diverge as q^{-3} in the static limit (longitudinal/transverse dipole
    fields) and decay as e^{-q} per crossing at large q.
    """
    if q <= 0:
        raise ValueError("q must be > 0")
    e = math.exp(-q)
    return DipoleCouplings(
        q=q,
        same_m0=3.0 * e * (1.0 + q) / q**3,
        same_m1=-1.5 * e * (1.0 + q + q * q) / q**3,
        cross_m1=-1.5 * e * (1.0 + q) / q**2,
    )
