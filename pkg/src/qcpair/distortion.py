"""Empirical quasisymmetry / quasi-Mobius distortion profiles, quasicircle
constants, and the pair verdict for the identity map between the relative
hyperbolic and chordal metrics on a boundary sample set.

Profiles are maxima over budgeted families of triples or quadruples: all
structured dyadic-spaced index patterns plus seeded random fill, or the full
enumeration when it fits the budget (always for quadruples over at most 40
points).  Ratios are binned at powers of two from
2^-10 to 2^10; out-of-range ratios clamp to the end bins and are counted.
Everything is deterministic given the seed; the outputs are empirical lower
envelopes of the true distortion function, never certificates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NotMonotone, TooFewSamples
from .geom import Region, as_complex, chordal_distance
from .gridmetric import DensityModel, GridSpec, metric_table

BIN_EXPONENTS = np.arange(-10, 11)
BINS = 2.0 ** BIN_EXPONENTS


def _bin_index(t: np.ndarray):
    """Nearest power-of-two bin; returns (index, low clamp mask, high clamp mask)."""
    lg = np.log2(t)
    k = np.rint(lg).astype(int)
    low = k < BIN_EXPONENTS[0]
    high = k > BIN_EXPONENTS[-1]
    k = np.clip(k, BIN_EXPONENTS[0], BIN_EXPONENTS[-1])
    return k - BIN_EXPONENTS[0], low, high


@dataclass
class DistortionProfile:
    """Per-bin maxima of output ratios over sampled point families.

    eta_hat[i] is the largest target-side ratio observed among families whose
    source-side ratio fell in bin i (NaN when the bin is empty); the witness
    stores the achieving family with its two ratios.
    """

    bins: np.ndarray
    eta_hat: np.ndarray
    witness: list
    sample_count: int
    clamped_low: int = 0
    clamped_high: int = 0

    def realized(self) -> np.ndarray:
        return ~np.isnan(self.eta_hat)

    def envelope(self) -> np.ndarray:
        """Monotone (nondecreasing) regularization of eta_hat, NaN off support."""
        out = np.full_like(self.eta_hat, np.nan)
        best = np.nan
        for i, v in enumerate(self.eta_hat):
            if not np.isnan(v):
                best = v if np.isnan(best) else max(best, v)
            out[i] = best
        return out

    def value_at(self, t: float) -> float:
        """Envelope evaluated at the bin nearest to ratio t."""
        i, _, _ = _bin_index(np.asarray([t]))
        return float(self.envelope()[i[0]])

    @property
    def eta1(self) -> float:
        return self.value_at(1.0)

    def end_slope(self) -> float:
        """Log-log slope between the two highest realized bins (0 if fewer)."""
        idx = np.flatnonzero(self.realized())
        if len(idx) < 2:
            return 0.0
        i, j = idx[-2], idx[-1]
        env = self.envelope()
        if env[i] <= 0 or env[j] <= 0:
            return 0.0
        return float((np.log2(env[j]) - np.log2(env[i])) / (j - i))


def _metric_matrix(points: Sequence, metric) -> np.ndarray:
    """Pairwise distance matrix from a metric spec: 'euclidean', 'chordal',
    an (n, n) array, or a callable on point pairs."""
    n = len(points)
    if isinstance(metric, np.ndarray):
        if metric.shape != (n, n):
            raise ValueError("metric matrix shape mismatch")
        return metric
    if metric == "euclidean":
        arr = np.asarray([as_complex(p) for p in points], dtype=complex)
        return np.abs(arr[:, None] - arr[None, :])
    if metric == "chordal":
        M = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                M[i, j] = M[j, i] = chordal_distance(points[i], points[j])
        return M
    if callable(metric):
        M = np.zeros((n, n))
        for i in range(n):
            for j in range(i + 1, n):
                M[i, j] = M[j, i] = float(metric(points[i], points[j]))
        return M
    raise ValueError(f"unsupported metric spec {metric!r}")


def _dyadic_triples(n: int) -> np.ndarray:
    """Structured triples (a, b, c) at dyadic index spacings in both directions."""
    gaps = [2 ** k for k in range(int(np.log2(max(n - 1, 1))) + 1)]
    out = []
    for a in range(n):
        for g1 in gaps:
            for g2 in gaps:
                b, c = a + g1, a - g2
                if 0 <= b < n and 0 <= c < n:
                    out.append((a, b, c))
    return np.asarray(out, dtype=np.int64) if out else np.empty((0, 3), dtype=np.int64)


def _random_triples(n: int, count: int, rng) -> np.ndarray:
    t = rng.integers(0, n, size=(count, 3))
    ok = (t[:, 0] != t[:, 1]) & (t[:, 0] != t[:, 2]) & (t[:, 1] != t[:, 2])
    return t[ok]


def _accumulate(profile_src: np.ndarray, profile_tgt: np.ndarray, families: np.ndarray,
                witness_pool: Sequence) -> DistortionProfile:
    """Shared binning: profile_src/profile_tgt are per-family ratios."""
    ok = np.isfinite(profile_src) & np.isfinite(profile_tgt) & (profile_src > 0) & (profile_tgt >= 0)
    src, tgt, fam = profile_src[ok], profile_tgt[ok], families[ok]
    eta = np.full(len(BINS), np.nan)
    wit: list = [None] * len(BINS)
    k, low, high = _bin_index(src)
    for bin_i in np.unique(k):
        sel = k == bin_i
        j = np.argmax(tgt[sel])
        val = tgt[sel][j]
        if np.isnan(eta[bin_i]) or val > eta[bin_i]:
            eta[bin_i] = val
            fam_idx = fam[sel][j]
            wit[bin_i] = dict(
                points=tuple(witness_pool[int(q)] for q in fam_idx),
                src_ratio=float(src[sel][j]), tgt_ratio=float(val))
    return DistortionProfile(bins=BINS.copy(), eta_hat=eta, witness=wit,
                             sample_count=int(ok.sum()),
                             clamped_low=int(low.sum()), clamped_high=int(high.sum()))


def qs_profile(pairs: Sequence, d_src="euclidean", d_tgt="euclidean",
               triple_budget: int = 100000, seed: int = 0) -> DistortionProfile:
    """Quasisymmetry profile of a sampled map given as (source, target) point
    pairs: over triples (a, b, c), bins t = d_src(a,b)/d_src(a,c) and records
    the max of d_tgt(a',b')/d_tgt(a',c').  Degenerate triples (zero
    denominator) are skipped."""
    if len(pairs) < 3:
        raise TooFewSamples("need at least 3 point pairs")
    src_pts = [p for p, _ in pairs]
    tgt_pts = [q for _, q in pairs]
    n = len(pairs)
    Ms = _metric_matrix(src_pts, d_src)
    Mt = _metric_matrix(tgt_pts, d_tgt)
    total = n * (n - 1) * (n - 2)
    if total <= triple_budget:
        ii, jj, kk = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        t = np.stack([ii.ravel(), jj.ravel(), kk.ravel()], axis=1)
        t = t[(t[:, 0] != t[:, 1]) & (t[:, 0] != t[:, 2]) & (t[:, 1] != t[:, 2])]
    else:
        rng = np.random.default_rng(seed)
        t = _dyadic_triples(n)
        fill = max(triple_budget - len(t), 0)
        t = np.concatenate([t, _random_triples(n, fill, rng)]) if fill else t
    a, b, c = t[:, 0], t[:, 1], t[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        src = Ms[a, b] / Ms[a, c]
        tgt = Mt[a, b] / Mt[a, c]
    return _accumulate(src, tgt, t, src_pts)


def _random_quads(n: int, count: int, rng) -> np.ndarray:
    q = rng.integers(0, n, size=(count, 4))
    ok = ((q[:, 0] != q[:, 1]) & (q[:, 0] != q[:, 2]) & (q[:, 0] != q[:, 3])
          & (q[:, 1] != q[:, 2]) & (q[:, 1] != q[:, 3]) & (q[:, 2] != q[:, 3]))
    return q[ok]


def _all_quads(n: int) -> np.ndarray:
    from itertools import combinations

    base = np.asarray(list(combinations(range(n), 4)), dtype=np.int64)
    # the three essentially different pairings of each 4-set
    perms = [(0, 1, 2, 3), (0, 2, 1, 3), (0, 1, 3, 2)]
    return np.concatenate([base[:, p] for p in perms])


def _dyadic_quads(n: int) -> np.ndarray:
    gaps = [2 ** k for k in range(int(np.log2(max(n - 1, 1))) + 1)]
    out = []
    for a in range(n):
        for g1 in gaps:
            for g2 in gaps:
                b, c, d = a + g1, a + g1 + g2, a - g2
                if 0 <= b < n and 0 <= c < n and 0 <= d < n and len({a, b, c, d}) == 4:
                    out.append((a, b, c, d))
    return np.asarray(out, dtype=np.int64) if out else np.empty((0, 4), dtype=np.int64)


def qm_profile(pairs: Sequence, d_src="euclidean", d_tgt="euclidean",
               quadruple_budget: int = 200000, seed: int = 0) -> DistortionProfile:
    """Quasi-Mobius profile: same accumulation as qs_profile with cross ratios
    [a,b,c,d] = d(a,c) d(b,d) / (d(a,d) d(b,c)) of quadruples on both sides."""
    if len(pairs) < 4:
        raise TooFewSamples("need at least 4 point pairs")
    src_pts = [p for p, _ in pairs]
    tgt_pts = [q for _, q in pairs]
    n = len(pairs)
    Ms = _metric_matrix(src_pts, d_src)
    Mt = _metric_matrix(tgt_pts, d_tgt)
    n_all = n * (n - 1) * (n - 2) * (n - 3) // 8  # distinct values
    if 3 * n_all <= quadruple_budget or n <= 40:
        q = _all_quads(n)
    else:
        rng = np.random.default_rng(seed)
        q = _dyadic_quads(n)
        fill = max(quadruple_budget - len(q), 0)
        q = np.concatenate([q, _random_quads(n, fill, rng)]) if fill else q
    a, b, c, d = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    with np.errstate(divide="ignore", invalid="ignore"):
        src = Ms[a, c] * Ms[b, d] / (Ms[a, d] * Ms[b, c])
        tgt = Mt[a, c] * Mt[b, d] / (Mt[a, d] * Mt[b, c])
    return _accumulate(src, tgt, q, src_pts)


def increasing_qs_ratio(F: Callable, domain: tuple, step: float):
    """sup over grid points (x, t) of (F(x+t) - F(x)) / (F(x) - F(x-t)) for a
    strictly increasing F; returns (sup, (x, t) witness).  Raises NotMonotone
    when a grid violation of monotonicity is found."""
    lo, hi = domain
    xs = np.arange(lo, hi + step / 2, step)
    Fv = np.asarray([float(F(x)) for x in xs])
    if np.any(np.diff(Fv) <= 0):
        i = int(np.argmin(np.diff(Fv)))
        raise NotMonotone(f"F not increasing near x = {xs[i]:.6g}")
    n = len(xs)
    best, wit = -np.inf, (np.nan, np.nan)
    for k in range(1, (n - 1) // 2 + 1):
        num = Fv[2 * k:] - Fv[k:-k]
        den = Fv[k:-k] - Fv[:-2 * k]
        r = num / den
        i = int(np.argmax(r))
        if r[i] > best:
            best, wit = float(r[i]), (float(xs[k:-k][i]), float(k * step))
    return best, wit


@dataclass
class QuasicircleReport:
    """Empirical quasicircle constants of a sampled closed curve: the
    three-point (smallest-arc diameter over chord) maximum and the minimal
    cross ratio over cyclically ordered quadruples, with witnesses."""

    three_point_L: float
    min_cross_ratio_delta: float
    worst_pair: tuple
    worst_quadruple: tuple


def quasicircle_constants(samples: Sequence, quadruple_budget: int = 200000,
                          seed: int = 0) -> QuasicircleReport:
    """Constants from cyclically ordered boundary samples (at least 8).

    The arc between a pair is taken as the side with fewer samples, ties
    toward the first-listed arc; for dense uniform samples this matches the
    smallest-diameter arc.  delta is minimized over all quadruples of a
    cyclic thinning plus seeded random cyclic quadruples.
    """
    pts = np.asarray([as_complex(p) for p in samples], dtype=complex)
    n = len(pts)
    if n < 8:
        raise TooFewSamples(f"{n} samples; need at least 8")
    D = np.abs(pts[:, None] - pts[None, :])
    best_L, worst_pair = 0.0, (0, 1)
    half = n // 2
    for i in range(n):
        ring = (i + np.arange(n)) % n
        diam = 0.0
        for k in range(1, half + 1):
            j = int(ring[k])
            diam = max(diam, float(D[j, ring[:k + 1]].max()))
            if 2 * k > n:
                continue
            chord = D[i, j]
            if chord <= 0:
                continue
            if 2 * k == n and j < i:
                continue  # tie handled from the first-listed side
            r = diam / chord
            if r > best_L:
                best_L, worst_pair = r, (i, j)
    # minimum cross ratio over cyclically ordered quadruples
    from itertools import combinations

    rng = np.random.default_rng(seed)
    thin = np.arange(0, n, max(1, n // 20))
    quads = [q for q in combinations(thin.tolist(), 4)]
    extra = max(quadruple_budget - len(quads), 0)
    if extra:
        rnd = np.sort(rng.integers(0, n, size=(extra, 4)), axis=1)
        ok = ((rnd[:, 0] < rnd[:, 1]) & (rnd[:, 1] < rnd[:, 2]) & (rnd[:, 2] < rnd[:, 3]))
        quads = np.concatenate([np.asarray(quads, dtype=np.int64), rnd[ok]])
    else:
        quads = np.asarray(quads, dtype=np.int64)
    a, b, c, d = quads[:, 0], quads[:, 1], quads[:, 2], quads[:, 3]
    with np.errstate(divide="ignore", invalid="ignore"):
        cr = D[a, c] * D[b, d] / (D[a, d] * D[b, c])
    cr = np.where(np.isfinite(cr), cr, np.inf)
    j = int(np.argmin(cr))
    return QuasicircleReport(
        three_point_L=float(best_L),
        min_cross_ratio_delta=float(cr[j]),
        worst_pair=(pts[worst_pair[0]], pts[worst_pair[1]]),
        worst_quadruple=tuple(pts[int(q)] for q in quads[j]),
    )


@dataclass
class PairVerdict:
    """Empirical verdict for one region pair: the distortion profile of the
    identity map from the relative hyperbolic metric to the chordal metric on
    the sample set, an advisory boundedness flag, and the sampling scale.  The
    flag is never a certificate."""

    profile: DistortionProfile
    bounded_at_scale: bool
    eta1: float
    threshold: float
    grid_h: float
    connectivity: int
    n_samples: int
    metric_matrix: np.ndarray = field(repr=False, default=None)


def pair_verdict(U: Region, V: Region, samples: Sequence, spec: GridSpec,
                 quadruple_budget: int = 200000, seed: int = 0,
                 threshold: float = 50.0,
                 model: Optional[DensityModel] = None) -> PairVerdict:
    """Builds the relative-metric table for the pair, the chordal table, and
    the quasi-Mobius profile of the identity between them.  bounded_at_scale
    requires eta_hat(1) below the caller threshold and an end-bin log-log
    growth slope under 1.5."""
    pts = [as_complex(p) for p in samples]
    M = metric_table(U, V, pts, spec, model=model)
    profile = qm_profile([(p, p) for p in pts], d_src=M, d_tgt="chordal",
                         quadruple_budget=quadruple_budget, seed=seed)
    eta1 = profile.eta1
    bounded = bool(np.isfinite(eta1) and eta1 <= threshold and profile.end_slope() < 1.5)
    return PairVerdict(profile=profile, bounded_at_scale=bounded, eta1=float(eta1),
                       threshold=threshold, grid_h=spec.h, connectivity=spec.connectivity,
                       n_samples=len(pts), metric_matrix=M)
