"""Closed-form transition predictions, the diagonal rate model, and
classical extraction of defect parameters from population maps.

Sign convention: Delta_k = omega_q - omega_k, so a defect above the qubit has
negative detuning and the dressed defect transition is pushed further above
the qubit (level repulsion).  The dressed detuning is
Delta_tilde = Delta + 2 g^2 / Delta.

All closed forms take and return ordinary frequencies in Hz.  Expressions
that mix detunings with decoherence rates (the rate-model coefficients)
convert to angular frequency internally, since rates in 1/s combine with
angular detunings in Lorentzian denominators.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import signal

from . import constants as c
from .errors import ValidationError
from .model import SystemSpec, TransmonParams
from .protocol import OmegaTMap

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DerivedQuantities:
    """Detunings and the combined decoherence rate for one qubit-defect pair."""

    delta: float          # Hz, omega_q - omega_k
    delta_tilde: float    # Hz, delta + 2 g^2 / delta
    total_rate: float     # 1/s, gamma_q + gamma_k + kappa_q + kappa_k


FEATURE_KINDS = ("TLS_01", "TLS_11", "QUBIT_10", "QUBIT_20", "UNKNOWN")


@dataclass(frozen=True)
class MapFeature:
    """One localized high-contrast region of a map."""

    center_frequency: float       # Hz
    oscillation_frequency: float  # Hz, dominant nonzero FFT component
    contrast: float               # mean |deviation from t=0| at the peak column
    kind: str = "UNKNOWN"

    def __post_init__(self):
        if not 0.0 <= self.contrast <= 1.0:
            raise ValidationError(f"contrast must lie in [0, 1], got {self.contrast}")
        if self.oscillation_frequency < 0:
            raise ValidationError("oscillation frequency must be >= 0")
        if self.kind not in FEATURE_KINDS:
            raise ValidationError(f"unknown feature kind {self.kind!r}")


@dataclass(frozen=True)
class TlsEstimate:
    """Recovered defect parameters from one TLS_01 feature."""

    frequency: float          # Hz
    coupling: float           # Hz
    source_feature: MapFeature
    residual: float           # normalized closure mismatch of the two equations
    converged: bool = True


def derived_quantities(spec: SystemSpec, k: int = 0) -> DerivedQuantities:
    tls = spec.tls[k]
    delta = spec.transmon.frequency - tls.frequency
    if delta == 0.0:
        raise ValidationError("qubit-defect detuning must be nonzero")
    return DerivedQuantities(
        delta=delta,
        delta_tilde=delta + 2.0 * tls.coupling ** 2 / delta,
        total_rate=spec.transmon.gamma + spec.transmon.kappa + tls.gamma + tls.kappa,
    )


def shift_delta_omega(coupling, delta, anharmonicity, amplitude) -> float:
    """Probe-frequency shift seen when the defect is excited:
    4 g^2/(U - Delta) + A^2 Delta / g^2."""
    if anharmonicity == delta:
        raise ValidationError("shift diverges at anharmonicity == detuning")
    if coupling <= 0:
        raise ValidationError("shift requires a positive coupling")
    return (4.0 * coupling ** 2 / (anharmonicity - delta)
            + amplitude ** 2 * delta / coupling ** 2)


def freq_two_photon(omega_q, anharmonicity, coupling, delta) -> float:
    """Two-photon drive frequency of the 0->2 transmon transition:
    omega_q - U/2 - g^2/(U - Delta)."""
    if anharmonicity == delta:
        raise ValidationError("two-photon frequency diverges at anharmonicity == detuning")
    return omega_q - anharmonicity / 2.0 - coupling ** 2 / (anharmonicity - delta)


def freq_01(omega_k, coupling, delta) -> float:
    """Drive frequency of the dressed 00 -> 01 (defect) transition:
    omega_k - g^2/Delta."""
    if delta == 0.0:
        raise ValidationError("dressed defect frequency diverges at zero detuning")
    return omega_k - coupling ** 2 / delta


def _rabi_01_signed(coupling, delta_tilde, drive_factor, amplitude) -> float:
    return coupling * amplitude / delta_tilde + drive_factor * amplitude


def rabi_01(coupling, delta_tilde, drive_factor, amplitude) -> float:
    """Oscillation frequency of the 00 <-> 01 transition, |g A / Delta_tilde + lambda A|."""
    if delta_tilde == 0.0:
        raise ValidationError("rabi_01 diverges at zero dressed detuning")
    return abs(_rabi_01_signed(coupling, delta_tilde, drive_factor, amplitude))


def freq_11(omega_q, omega_k, coupling, anharmonicity, delta_tilde) -> float:
    """Drive frequency of the two-photon 00 -> 11 transition:
    (omega_q + omega_k)/2 + g^2/(U - Delta_tilde)."""
    if anharmonicity == delta_tilde:
        raise ValidationError("freq_11 diverges at anharmonicity == dressed detuning")
    return 0.5 * (omega_q + omega_k) + coupling ** 2 / (anharmonicity - delta_tilde)


def _rabi_11_signed(amplitude, coupling, anharmonicity, delta_tilde, drive_factor) -> float:
    return (2.0 * amplitude ** 2 * coupling
            * (anharmonicity + drive_factor ** 2 * (anharmonicity - delta_tilde))
            / (delta_tilde ** 2 * (anharmonicity - delta_tilde)))


def rabi_11(amplitude, coupling, anharmonicity, delta_tilde, drive_factor=0.0) -> float:
    """Oscillation frequency of the 00 <-> 11 transition."""
    if delta_tilde == 0.0 or anharmonicity == delta_tilde:
        raise ValidationError("rabi_11 diverges for this detuning")
    return abs(_rabi_11_signed(amplitude, coupling, anharmonicity, delta_tilde, drive_factor))


def steady_population_approx(coupling, amplitude, delta, rates) -> float:
    """Long-drive qubit population for a resonantly driven defect:

        (2 g^2 G + A^2 (gq + kq)) / (6 g^2 G + 3 A^2 (gq + kq) + 8 gq Delta^2)

    with G the combined rate.  rates = (gamma_q, kappa_q, gamma_k, kappa_k).
    The g, A, Delta arguments must share one frequency convention (Hz here);
    the ratio is invariant under the common 2*pi.
    """
    gq, kq, gk, kk = rates
    if min(gq, kq, gk, kk) < 0 or (gq + kq + gk + kk) == 0:
        raise ValidationError("rates must be >= 0 and not all zero")
    total = gq + kq + gk + kk
    num = 2.0 * coupling ** 2 * total + amplitude ** 2 * (gq + kq)
    den = (6.0 * coupling ** 2 * total + 3.0 * amplitude ** 2 * (gq + kq)
           + 8.0 * gq * delta ** 2)
    if den == 0.0:
        raise ValidationError("steady-population denominator vanished")
    return num / den


def rate_coefficients(spec: SystemSpec, amplitude, delta, k: int = 0):
    """Pumping and exchange rates (c1, c2, c3) of the diagonal rate model.

    c1: off-resonant qubit pumping, c2: resonant defect pumping through the
    qubit, c3: qubit-defect population exchange.  Valid for g, A well below
    |Delta|; a warning is emitted outside that regime.
    """
    tls = spec.tls[k]
    tq = spec.transmon
    if max(tls.coupling, amplitude) > 0.5 * abs(delta):
        warnings.warn("rate coefficients assume g, A << |Delta|; "
                      f"got g={tls.coupling:.3g}, A={amplitude:.3g}, "
                      f"|Delta|={abs(delta):.3g}", stacklevel=2)
    ga = TWO_PI * tls.coupling
    aa = TWO_PI * amplitude
    da = TWO_PI * delta
    dta = da + 2.0 * ga ** 2 / da if da != 0.0 else math.inf
    omega01 = ga * aa / dta + tls.drive_factor * aa
    total = tq.gamma + tq.kappa + tls.gamma + tls.kappa
    c1 = (aa / 2.0) ** 2 * (tq.gamma + tq.kappa) / (da ** 2 + (tq.gamma + tq.kappa) ** 2)
    c2 = (omega01 ** 2 * (tls.gamma + tls.kappa)
          / ((2.0 * ga ** 2 / da) ** 2 + (tls.gamma + tls.kappa) ** 2))
    c3 = ga ** 2 * total / (da ** 2 + total ** 2)
    return c1, c2, c3


def rate_evolve(c1, c2, c3, gamma_q, gamma_k, p0, t_final, max_step=None):
    """Integrate the three-level rate model with fixed-step RK4.

        dP0/dt = gq Pq + gk Pt + c1 (Pq - P0) + c2 (Pt - P0)
        dPq/dt = -gq Pq + c1 (P0 - Pq) + c3 (Pt - Pq)
        dPt/dt = -gk Pt + c2 (P0 - Pt) + c3 (Pq - Pt)

    p0 = (P0, Pq, Pt) on the probability simplex.  Returns (times, P[n, 3]).
    """
    p = np.asarray(p0, dtype=float)
    if p.shape != (3,) or np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise ValidationError("initial populations must lie on the probability simplex")
    mat = np.array([
        [-(c1 + c2), gamma_q + c1, gamma_k + c2],
        [c1, -(gamma_q + c1 + c3), c3],
        [c2, c3, -(gamma_k + c2 + c3)],
    ])
    fastest = max(c1, c2, c3, gamma_q, gamma_k, 1e-30)
    step = 1.0 / (100.0 * fastest)
    if max_step is not None:
        step = min(step, max_step)
    n_steps = max(int(math.ceil(t_final / step)), 1)
    step = t_final / n_steps
    times = np.linspace(0.0, t_final, n_steps + 1)
    out = np.empty((n_steps + 1, 3))
    out[0] = p
    for i in range(n_steps):
        k1 = mat @ p
        k2 = mat @ (p + 0.5 * step * k1)
        k3 = mat @ (p + 0.5 * step * k2)
        k4 = mat @ (p + step * k3)
        p = p + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = p
    return times, out


def rate_steady_full(c1, c2, c3, gamma_q, gamma_k) -> float:
    """Exact steady qubit population of the rate model (its unique fixed
    point on the simplex)."""
    num = c2 * c3 + c1 * (c2 + c3 + gamma_k)
    den = (3.0 * c1 * (c2 + c3) + 2.0 * c1 * gamma_k + gamma_q * (2.0 * c2 + gamma_k)
           + 3.0 * c2 * c3 + c3 * (gamma_q + gamma_k))
    if den == 0.0:
        raise ValidationError("rate model has no unique steady state (all rates zero)")
    return num / den


# --- feature extraction ---

def _fft_peak_frequency(series: np.ndarray, dt: float) -> float:
    """Dominant nonzero-frequency component, Hann windowed, with parabolic
    interpolation around the peak bin.  Ties break toward lower frequency."""
    sig = series - series.mean()
    n = len(sig)
    spectrum = np.abs(np.fft.rfft(sig * np.hanning(n)))
    if len(spectrum) < 2:
        return 0.0
    k = 1 + int(np.argmax(spectrum[1:]))
    shift = 0.0
    if 1 <= k < len(spectrum) - 1:
        left, mid, right = spectrum[k - 1], spectrum[k], spectrum[k + 1]
        denom = left - 2.0 * mid + right
        if denom != 0.0:
            shift = 0.5 * (left - right) / denom
    return max((k + shift) / (n * dt), 0.0)


def _detrend(series: np.ndarray, dt: float) -> np.ndarray:
    """Remove a cubic trend: kills the saturation/decay envelope that would
    otherwise dominate the lowest spectral bins."""
    t = np.arange(len(series)) * dt
    coeffs = np.polynomial.polynomial.polyfit(t, series, 3)
    return series - np.polynomial.polynomial.polyval(t, coeffs)


def _tone_candidates(series: np.ndarray, dt: float, count: int = 3):
    """Strongest oscillation candidates of a detrended column: local maxima
    of the Hann spectrum, parabolic-refined, strongest first."""
    sig = _detrend(series, dt)
    n = len(sig)
    spectrum = np.abs(np.fft.rfft(sig * np.hanning(n)))
    if len(spectrum) < 3:
        return []
    peaks, _ = signal.find_peaks(spectrum[1:])
    peaks = peaks + 1
    if len(peaks) == 0:
        peaks = np.array([1 + int(np.argmax(spectrum[1:]))])
    order = np.argsort(spectrum[peaks])[::-1][:count]
    out = []
    for k in peaks[order]:
        shift = 0.0
        if 1 <= k < len(spectrum) - 1:
            left, mid, right = spectrum[k - 1], spectrum[k], spectrum[k + 1]
            denom = left - 2.0 * mid + right
            if denom != 0.0:
                shift = 0.5 * (left - right) / denom
        out.append((max((k + shift) / (n * dt), 0.0), float(spectrum[k])))
    return out


def _refine_tone(series: np.ndarray, dt: float, guess: float) -> float:
    """Sub-bin frequency refinement: scan around `guess` and keep the
    frequency whose quadratic-plus-sinusoid linear model fits the raw column
    best.  Linear least squares only, so it is deterministic and robust."""
    n = len(series)
    t = np.arange(n) * dt
    bin_width = 1.0 / (n * dt)
    lo = max(guess - bin_width, 0.25 * bin_width)
    best_f, best_res = guess, np.inf
    for f in np.linspace(lo, guess + bin_width, 33):
        design = np.column_stack([np.ones(n), t, t * t,
                                  np.cos(TWO_PI * f * t), np.sin(TWO_PI * f * t)])
        _, res, _, _ = np.linalg.lstsq(design, series, rcond=None)
        res = res[0] if len(res) else np.inf
        if res < best_res:
            best_f, best_res = f, res
    return float(best_f)


def _alias(freq: float, sample_rate: float) -> float:
    """Frequency as seen by a sampler: folded into [0, sample_rate/2]."""
    folded = math.fmod(freq, sample_rate)
    if folded < 0:
        folded += sample_rate
    return min(folded, sample_rate - folded)


def _column_oscillation(series: np.ndarray, dt: float, excluded=()):
    """Strongest oscillation of one column, refined to sub-bin accuracy.

    Candidates inside the excluded bands (the predictable off-resonant drive
    wiggle of the qubit) are rejected.
    """
    candidates = _tone_candidates(series, dt)
    bin_width = 1.0 / (len(series) * dt)
    if excluded:
        candidates = [cand for cand in candidates
                      if all(abs(cand[0] - f) > max(1.5 * bin_width, 0.08 * f)
                             for f in excluded)]
    if not candidates or candidates[0][0] <= 0:
        return None
    return _refine_tone(series, dt, candidates[0][0])


def _filtered_tones(values, dt, axis, bans_of, cache, i, count=6):
    """Tone candidates of column i, split into (clean, banned) by the bans."""
    if i not in cache:
        bin_width = 1.0 / (values.shape[1] * dt)
        cands = _tone_candidates(values[i], dt, count=count)
        bans = bans_of(axis[i])
        clean, banned = [], []
        for cand in cands:
            near_ban = any(abs(cand[0] - b) <= max(1.5 * bin_width, 0.08 * b)
                           for b in bans)
            (banned if near_ban else clean).append(cand)
        cache[i] = (clean, banned)
    return cache[i]


def _measure_chevron(values, dt, axis, col0, center0, bans_of):
    """Per-column oscillation readings around an interior chevron, plus fit.

    The strongest clean tone in the window seeds the on-resonance estimate
    (the central column itself can be masked by the drive-wiggle complex);
    every other column must then show a tone near the generalized frequency
    sqrt(base^2 + detuning^2), which rejects both the slow saturation lobe
    and fast off-resonant drive wiggles.
    Returns (center, oscillation) or None.
    """
    n_cols = len(axis)
    bin_width = 1.0 / (values.shape[1] * dt)
    lo = max(col0 - c.FIT_WINDOW_STEPS, 0)
    hi = min(col0 + c.FIT_WINDOW_STEPS, n_cols - 1)
    cache = {}

    # seed from the window column with the strongest clean tone: the central
    # column itself can be fully masked by the drive-wiggle complex
    seed_col, seed_tone = col0, None
    for i in range(lo, hi + 1):
        clean, _ = _filtered_tones(values, dt, axis, bans_of, cache, i)
        if clean and clean[0][0] > 0:
            if seed_tone is None or clean[0][1] > seed_tone[1]:
                seed_col, seed_tone = i, clean[0]
    if seed_tone is None:
        return None
    base_at_seed = _refine_tone(values[seed_col], dt, seed_tone[0])
    # translate the seed reading to the apex via the chevron relation
    seed_detuning = axis[seed_col] - center0
    base = base_at_seed
    if base_at_seed > abs(seed_detuning):
        base = math.sqrt(base_at_seed ** 2 - seed_detuning ** 2)

    freqs, oscs, amps = [], [], []
    for i in range(lo, hi + 1):
        if i == seed_col:
            freqs.append(float(axis[i]))
            oscs.append(base_at_seed)
            amps.append(seed_tone[1])
            continue
        expected = math.hypot(base, axis[i] - center0)
        clean, _ = _filtered_tones(values, dt, axis, bans_of, cache, i)
        window = max(0.4 * expected, 1.5 * bin_width)
        near = [t for t in clean if t[0] > 0 and abs(t[0] - expected) <= window]
        if not near:
            continue
        # strongest tone in the acceptance window, not merely the nearest:
        # weak spectral junk can sit closer to the prediction than the chevron
        cand, amp = max(near, key=lambda t: t[1])
        freqs.append(float(axis[i]))
        oscs.append(_refine_tone(values[i], dt, cand))
        amps.append(amp)
    return _chevron_vertex_fit(freqs, oscs, weights=amps)


def _measure_edge_chevron(values, dt, axis, col0, bans_of):
    """Vertex fit for a chevron whose apex fell just outside the scan band.

    Only one wing is visible, so readings are chained outward from the edge
    column: the generalized Rabi frequency changes by at most one grid step
    per column (1-Lipschitz in detuning), tolerating gaps.  Several seed
    tones are tried and the longest chain with a valid vertex fit wins.
    Returns (center, oscillation) or None.
    """
    n_cols = len(axis)
    step = float(axis[1] - axis[0]) if n_cols > 1 else 0.0
    bin_width = 1.0 / (values.shape[1] * dt)
    lo = max(col0 - c.FIT_WINDOW_STEPS, 0)
    hi = min(col0 + c.FIT_WINDOW_STEPS, n_cols - 1)
    cache = {}

    clean0, banned0 = _filtered_tones(values, dt, axis, bans_of, cache, col0)
    seeds = [t for t in clean0[:2] if t[0] > 0]
    # when nothing credible survives the ban, the banned tone may have been
    # the real one (the wiggle prediction can coincide with the chevron)
    if banned0 and (not clean0 or clean0[0][1] < 0.2 * banned0[0][1]):
        seeds.append(banned0[0])

    best = None
    for seed, seed_amp in seeds:
        accepted = {col0: (seed, seed_amp)}
        for direction in (-1, 1):
            prev = seed
            allowance = 0.0
            i = col0
            while lo <= i + direction <= hi:
                i += direction
                allowance += 1.3 * step + 0.5 * bin_width
                clean, _ = _filtered_tones(values, dt, axis, bans_of, cache, i)
                near = [t for t in clean if t[0] > 0 and abs(t[0] - prev) <= allowance]
                if not near:
                    continue
                cand = max(near, key=lambda t: t[1])
                accepted[i] = cand
                prev = cand[0]
                allowance = 0.0
        if len(accepted) < 3:
            continue
        cols = sorted(accepted)
        freqs = [float(axis[i]) for i in cols]
        oscs = [_refine_tone(values[i], dt, accepted[i][0]) for i in cols]
        amps = [accepted[i][1] for i in cols]
        fit = _chevron_vertex_fit(freqs, oscs, weights=amps,
                                  slack_lo=6.0, slack_hi=6.0)
        # chains are scored by total spectral amplitude: a long chain of weak
        # junk tones must not outrank a short chain of real feature tones
        score = sum(amps)
        if fit is not None and (best is None or score > best[0]):
            best = (score, fit)
    return best[1] if best else None


def _feature_core(contrast: np.ndarray, peak: int, fraction: float):
    """Contiguous columns around `peak` with contrast >= fraction * peak,
    stopping where the profile starts rising again (valley boundaries)."""
    floor = fraction * contrast[peak]
    lo = peak
    while lo > 0 and contrast[lo - 1] >= floor and contrast[lo - 1] <= contrast[lo]:
        lo -= 1
    hi = peak
    while (hi < len(contrast) - 1 and contrast[hi + 1] >= floor
           and contrast[hi + 1] <= contrast[hi]):
        hi += 1
    return lo, hi


def _peak_center(contrast: np.ndarray, peak: int, axis: np.ndarray) -> float:
    """Sub-step feature center: parabola through the contrast peak and its
    neighbors; contrast-weighted centroid of the half-max core at axis edges."""
    if 1 <= peak < len(contrast) - 1:
        left, mid, right = contrast[peak - 1], contrast[peak], contrast[peak + 1]
        denom = left - 2.0 * mid + right
        if denom != 0.0:
            shift = 0.5 * (left - right) / denom
            step = axis[peak + 1] - axis[peak]
            return float(axis[peak] + shift * step)
    lo, hi = _feature_core(contrast, peak, c.FEATURE_CORE_FRACTION)
    weights = contrast[lo:hi + 1]
    return float(np.sum(axis[lo:hi + 1] * weights) / np.sum(weights))


def _chevron_vertex_fit(freqs, oscs, weights=None, slack_lo=1.0, slack_hi=1.0):
    """Fit osc^2 = Omega0^2 + (f - f0)^2 to per-column oscillation readings.

    Detuned Rabi oscillation runs at the generalized frequency, so the
    squared oscillation is a unit-curvature parabola in drive frequency with
    its vertex at the resonance.  Weighted linear least squares in
    (f0, f0^2+Omega0^2); weights are spectral amplitudes, concentrating the
    fit where the feature actually rings.  The vertex may sit up to
    slack_lo/slack_hi grid steps outside the fitted span (raised at axis
    edges, where only one chevron wing is visible).
    Returns (f0, Omega0) or None when the fit is unusable.
    """
    freqs = np.asarray(freqs, dtype=float)
    oscs = np.asarray(oscs, dtype=float)
    if weights is None:
        weights = np.ones_like(oscs)
    weights = np.asarray(weights, dtype=float)
    keep = oscs > 0
    if keep.sum() < 3:
        return None
    # work relative to the window midpoint: the fit differences gigahertz
    # frequencies against megahertz oscillations and would otherwise cancel
    ref = freqs[keep].mean()
    f = freqs[keep] - ref
    y = oscs[keep] ** 2 - f ** 2
    w = weights[keep]
    w = np.sqrt(w / w.max()) if w.max() > 0 else np.ones_like(w)

    def solve(fs, ys, ws):
        design = np.column_stack([-2.0 * fs * ws, ws])
        (v0, const), *_ = np.linalg.lstsq(design, ys * ws, rcond=None)
        return v0, const

    f0, const = solve(f, y, w)
    # one robustification round: tones of an overlapping foreign feature
    # (for example the two-photon transmon line, whose curvature differs)
    # stand out against the unit-curvature model and are dropped
    residuals = np.abs(y - (const - 2.0 * f0 * f))
    scale = np.median(residuals)
    if scale > 0 and len(f) > 3:
        inliers = residuals <= 3.0 * scale
        if inliers.sum() >= 3 and inliers.sum() < len(f):
            f, y, w = f[inliers], y[inliers], w[inliers]
            f0, const = solve(f, y, w)

    omega_sq = const - f0 ** 2
    step = np.diff(np.sort(f)).min()
    if not (f.min() - slack_lo * step <= f0 <= f.max() + slack_hi * step):
        return None
    if omega_sq <= 0:
        return None
    return float(f0 + ref), float(math.sqrt(omega_sq))


def extract_features(omega_t_map: OmegaTMap,
                     contrast_threshold: float = c.FEATURE_CONTRAST_THRESHOLD):
    """Locate and classify high-contrast regions of a map.

    Per column the t=0 baseline is subtracted; contrast is the time-averaged
    absolute deviation.  Peaks of the contrast profile become features, with
    the center taken as the contrast-weighted centroid of the half-max core
    around each peak and the oscillation read off the peak column's spectrum.

    Classification uses only what an experimenter would know: the calibrated
    qubit frequency, the bare transmon parameters, and the features
    themselves (a slow feature near the qubit-defect midpoint is the
    two-photon 11 line of a faster 01 feature).
    """
    values = omega_t_map.values
    grid = omega_t_map.grid
    deviations = values - values[:, :1]
    contrast = np.mean(np.abs(deviations), axis=1)

    peaks, _ = signal.find_peaks(contrast, height=contrast_threshold,
                                 prominence=0.3 * contrast_threshold)
    peaks = list(peaks)
    # axis-edge maxima have no interior peak; a chevron whose apex fell just
    # off the scan still shows its wing as a rising edge
    n_cols = len(contrast)
    if n_cols >= 2 and contrast[0] > contrast_threshold and contrast[0] > contrast[1]:
        peaks.insert(0, 0)
    if n_cols >= 2 and contrast[-1] > contrast_threshold and contrast[-1] > contrast[-2]:
        peaks.append(n_cols - 1)
    if len(peaks) == 0 and contrast.max() > contrast_threshold:
        peaks = [int(np.argmax(contrast))]

    omega_tilde = omega_t_map.calibration.omega_tilde_q
    amp = omega_t_map.pulse_a_amplitude
    sample_rate = 1.0 / grid.dt

    def wiggle_bands(freq):
        # the detuned qubit drive rings at its (aliased) generalized Rabi
        # frequency on every column; suppress it away from the qubit itself
        detuning = freq - omega_tilde
        if abs(detuning) < 2.5 * amp:
            return ()
        return (_alias(math.hypot(amp, detuning), sample_rate),)

    features = []
    for peak in peaks:
        peak = int(peak)
        center0 = _peak_center(contrast, peak, grid.omega_d_axis)
        col0 = int(np.argmin(np.abs(grid.omega_d_axis - center0)))

        if peak in (0, n_cols - 1):
            fit = _measure_edge_chevron(values, grid.dt, grid.omega_d_axis,
                                        col0, wiggle_bands)
        else:
            fit = _measure_chevron(values, grid.dt, grid.omega_d_axis,
                                   col0, center0, wiggle_bands)
        if fit is not None:
            center, oscillation = fit
        else:
            # no usable chevron trace: read the central column alone and
            # remove its detuning from the contrast center, since off
            # resonance the oscillation runs at the generalized rate
            center = center0
            oscillation = _column_oscillation(
                values[col0], grid.dt,
                excluded=wiggle_bands(grid.omega_d_axis[col0]))
            if oscillation is not None:
                offset = abs(grid.omega_d_axis[col0] - center0)
                if oscillation > offset:
                    oscillation = math.sqrt(oscillation ** 2 - offset ** 2)
        features.append(MapFeature(center_frequency=center,
                                   oscillation_frequency=oscillation or 0.0,
                                   contrast=float(contrast[peak]),
                                   kind="UNKNOWN"))
    return _classify_features(features, omega_t_map)


def _classify_features(features, omega_t_map: OmegaTMap):
    grid = omega_t_map.grid
    tq = omega_t_map.spec.transmon
    proximity = c.FEATURE_PROXIMITY_STEPS * grid.freq_step
    if proximity == 0.0:
        proximity = c.FEATURE_PROXIMITY_STEPS * c.DEFAULT_FREQ_STEP
    omega_tilde = omega_t_map.calibration.omega_tilde_q
    two_photon_bare = tq.frequency - tq.anharmonicity / 2.0

    classified = []
    tls_candidates = []
    for f in features:
        if abs(f.center_frequency - omega_tilde) <= proximity:
            classified.append((f, "QUBIT_10"))
        elif abs(f.center_frequency - two_photon_bare) <= proximity:
            classified.append((f, "QUBIT_20"))
        else:
            tls_candidates.append(f)

    # among the remaining features, a slower one sitting near the midpoint of
    # the bare qubit and a faster feature is that feature's two-photon partner
    kinds = {id(f): "TLS_01" for f in tls_candidates}
    for f in tls_candidates:
        midpoint = 0.5 * (tq.frequency + f.center_frequency)
        for other in tls_candidates:
            if other is f:
                continue
            if (abs(other.center_frequency - midpoint) <= proximity
                    and other.oscillation_frequency < f.oscillation_frequency):
                kinds[id(other)] = "TLS_11"
    for f in tls_candidates:
        classified.append((f, kinds.get(id(f), "UNKNOWN")))

    out = [MapFeature(f.center_frequency, f.oscillation_frequency, f.contrast, kind)
           for f, kind in classified]
    out.sort(key=lambda f: f.center_frequency)
    return out


def estimate_tls(features, transmon: TransmonParams, amplitude: float,
                 max_iterations: int = c.ESTIMATOR_MAX_ITERATIONS,
                 tolerance: float = c.ESTIMATOR_TOLERANCE):
    """Invert the 01-transition formulas for (frequency, coupling) per feature.

    Solves center = freq_01(omega_k, g) and oscillation = rabi_01(g) jointly
    by damped fixed-point iteration; the dressed detuning is recomputed each
    round.  Only TLS_01 features are inverted.
    """
    estimates = []
    for feature in features:
        if feature.kind != "TLS_01":
            continue
        center = feature.center_frequency
        oscillation = feature.oscillation_frequency
        omega_k = center
        coupling = 0.0
        converged = False
        for _ in range(max_iterations):
            delta = transmon.frequency - omega_k
            if delta == 0.0:
                break
            delta_tilde = delta + 2.0 * coupling ** 2 / delta
            if delta_tilde == 0.0 or amplitude == 0.0:
                break
            new_coupling = abs(oscillation * delta_tilde / amplitude)
            new_omega = center + new_coupling ** 2 / delta
            damp = c.ESTIMATOR_DAMPING
            next_omega = (1 - damp) * omega_k + damp * new_omega
            next_coupling = (1 - damp) * coupling + damp * new_coupling
            # divergence guard: iterates racing past any physical scale
            if not (0.0 <= next_coupling < abs(delta) + abs(center)) \
                    or not (0.1 * center < next_omega < 10.0 * center):
                break
            if (abs(next_omega - omega_k) < tolerance
                    and abs(next_coupling - coupling) < tolerance):
                omega_k, coupling = next_omega, next_coupling
                converged = True
                break
            omega_k, coupling = next_omega, next_coupling

        delta = transmon.frequency - omega_k
        residual = math.inf
        if delta != 0.0 and coupling >= 0.0:
            delta_tilde = delta + 2.0 * coupling ** 2 / delta
            center_back = freq_01(omega_k, coupling, delta)
            rabi_back = (rabi_01(coupling, delta_tilde, 0.0, amplitude)
                         if delta_tilde != 0.0 else math.inf)
            scale = max(oscillation, tolerance)
            residual = (abs(center_back - center) / max(abs(center), 1.0)
                        + abs(rabi_back - oscillation) / scale)
        # a fixed point that ran far from its own feature is spurious: the
        # dressed shift g^2/Delta cannot exceed a fraction of the detuning
        # in any regime where the inverted formulas mean anything
        if abs(omega_k - center) > 0.5 * abs(transmon.frequency - omega_k):
            converged = False
        estimates.append(TlsEstimate(frequency=omega_k, coupling=coupling,
                                     source_feature=feature, residual=residual,
                                     converged=converged))
    return estimates
