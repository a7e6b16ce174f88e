"""Pure-numpy Monte Carlo backend.

Paths are driven by a counter-based generator: every variate is a hash of
(seed, path index, step index, stream), so results are independent of
chunking or evaluation order and bit-reproducible for a given seed. The
compiled kernel (``_kernel``) implements the identical scheme; estimates from
the two backends agree to floating-point noise.

Streams: 0 = step increment normals, 1 = bridge-minimum uniforms,
2 = default-time uniform (step 0).
"""

from __future__ import annotations

import numpy as np

_M64 = (1 << 64) - 1
_GOLD = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_STREAM = 0xD6E8FEB86659FD93
_INV53 = 1.0 / 9007199254740992.0  # 2**-53, exact

_CHUNK = 1 << 15

# Acklam's rational approximation to the standard normal inverse CDF
# (relative error < 1.2e-9, far below Monte Carlo noise).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _mix64_int(z: int) -> int:
    z &= _M64
    z = ((z ^ (z >> 30)) * _MIX1) & _M64
    z = ((z ^ (z >> 27)) * _MIX2) & _M64
    return z ^ (z >> 31)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def _path_keys(seed: int, start: int, count: int) -> np.ndarray:
    run_key = _mix64_int((int(seed) + _GOLD) & _M64)
    ids = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return _mix64((ids * np.uint64(_MIX1)) ^ np.uint64(run_key))


def _draw(path_keys: np.ndarray, step: int, stream: int) -> np.ndarray:
    tag = (step * _MIX2 + stream * _STREAM + _GOLD) & _M64
    return _mix64(path_keys ^ np.uint64(tag))


def _uniform(bits: np.ndarray) -> np.ndarray:
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53


def _norm_ppf(p: np.ndarray) -> np.ndarray:
    x = np.empty_like(p)
    lo = p < _P_LOW
    hi = p > 1.0 - _P_LOW
    mid = ~(lo | hi)

    q = p[mid] - 0.5
    r = q * q
    num = ((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    x[mid] = num * q / den

    for mask, tail_p, sign in ((lo, p[lo], 1.0), (hi, 1.0 - p[hi], -1.0)):
        if mask.any():
            q = np.sqrt(-2.0 * np.log(tail_p))
            num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
            den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
            x[mask] = sign * num / den
    return x


def debug_draw(seed: int, path: int, step: int, stream: int) -> tuple[int, float]:
    """Raw (bits, uniform) for one counter position; used to check that the
    compiled kernel implements the identical generator."""
    bits = _draw(_path_keys(seed, path, 1), step, stream)
    return int(bits[0]), float(_uniform(bits)[0])


def touch_stats(log_dist: float, drift: float, sigma: float, r: float,
                maturity: float, n_steps: int, seed: int, n_paths: int,
                bridge: bool) -> tuple[int, float, float]:
    """Simulate first passage of ``y = log(S/b)`` to zero from ``log_dist``.

    Returns (n_hit, sum of discounted unit payoffs at hit, sum of squares).
    With ``bridge`` the within-step minimum of the Brownian bridge is sampled
    exactly, so crossing detection has no time-discretisation bias; the hit
    is then booked at the step midpoint (step end without the bridge).
    """
    dt = maturity / n_steps
    sig2 = sigma * sigma
    sqdt = np.sqrt(dt)
    n_hit_total = 0
    sum_df = 0.0
    sumsq_df = 0.0
    for start in range(0, n_paths, _CHUNK):
        count = min(_CHUNK, n_paths - start)
        keys = _path_keys(seed, start, count)
        y = np.full(count, float(log_dist))
        for k in range(1, n_steps + 1):
            if keys.size == 0:
                break
            z = _norm_ppf(_uniform(_draw(keys, k, 0)))
            y1 = y + drift * dt + sigma * sqdt * z
            if bridge:
                u = _uniform(_draw(keys, k, 1))
                dy = y1 - y
                m = 0.5 * (y + y1 - np.sqrt(dy * dy - 2.0 * sig2 * dt * np.log(u)))
                t_hit = (k - 0.5) * dt
            else:
                m = y1
                t_hit = k * dt
            crossed = m <= 0.0
            n_cross = int(np.count_nonzero(crossed))
            if n_cross:
                df = float(np.exp(-r * t_hit))
                n_hit_total += n_cross
                sum_df += df * n_cross
                sumsq_df += df * df * n_cross
                keep = ~crossed
                keys = keys[keep]
                y1 = y1[keep]
            y = y1
    return n_hit_total, sum_df, sumsq_df


def progressive_stats(log_spot: float, log_barriers: np.ndarray,
                      losses: np.ndarray, drift: float, sigma: float,
                      r: float, hazard: float, maturity: float, n_steps: int,
                      seed: int, n_paths: int, bridge: bool) -> tuple[float, float]:
    """Jump-to-default claim over a descending ladder of barriers.

    Each barrier pays its loss at its first diffusion hit; on default (an
    independent exponential time, when the stock jumps to zero) all remaining
    losses pay at the default time. Returns (sum of per-path discounted
    payoffs, sum of squares).
    """
    log_barriers = np.asarray(log_barriers, dtype=np.float64)
    losses = np.asarray(losses, dtype=np.float64)
    n_bar = log_barriers.size
    # suffix[j] = losses still owed when barriers j..n-1 are unhit at default
    suffix = np.concatenate([np.cumsum(losses[::-1])[::-1], [0.0]])
    dt = maturity / n_steps
    sig2 = sigma * sigma
    sum_pay = 0.0
    sumsq_pay = 0.0
    for start in range(0, n_paths, _CHUNK):
        count = min(_CHUNK, n_paths - start)
        keys = _path_keys(seed, start, count)
        if hazard > 0.0:
            tau = -np.log(_uniform(_draw(keys, 0, 2))) / hazard
        else:
            tau = np.full(count, np.inf)
        y = np.full(count, float(log_spot))
        pay = np.zeros(count)
        nxt = np.zeros(count, dtype=np.int64)
        # barriers at or above the spot are hit immediately, paid at t=0
        for j in range(n_bar):
            at_start = (nxt == j) & (log_spot <= log_barriers[j])
            pay[at_start] += losses[j]
            nxt[at_start] += 1
        t0 = 0.0
        for k in range(1, n_steps + 1):
            alive = nxt < n_bar
            if not alive.all():
                done = pay[~alive]
                sum_pay += float(done.sum())
                sumsq_pay += float((done * done).sum())
                keys, y, pay, nxt, tau = (a[alive] for a in (keys, y, pay, nxt, tau))
            if keys.size == 0:
                break
            t1 = k * dt
            defaulting = tau < t1
            dt_p = np.where(defaulting, tau - t0, dt)
            z = _norm_ppf(_uniform(_draw(keys, k, 0)))
            y1 = y + drift * dt_p + sigma * np.sqrt(dt_p) * z
            if bridge:
                u = _uniform(_draw(keys, k, 1))
                dy = y1 - y
                m = 0.5 * (y + y1 - np.sqrt(dy * dy - 2.0 * sig2 * dt_p * np.log(u)))
                t_hit = t0 + 0.5 * dt_p
            else:
                m = y1
                t_hit = t0 + dt_p
            for j in range(n_bar):
                hit = (nxt == j) & (m <= log_barriers[j])
                if hit.any():
                    pay[hit] += losses[j] * np.exp(-r * t_hit[hit])
                    nxt[hit] += 1
            remaining = defaulting & (nxt < n_bar)
            if remaining.any():
                pay[remaining] += suffix[nxt[remaining]] * np.exp(-r * tau[remaining])
            # a defaulted path is finished even when nothing was left to pay
            nxt = np.where(defaulting, n_bar, nxt)
            y = y1
            t0 = t1
        sum_pay += float(pay.sum())
        sumsq_pay += float((pay * pay).sum())
    return sum_pay, sumsq_pay


def default_time_uniforms(seed: int, n_paths: int) -> np.ndarray:
    """Stream-2 uniforms used for exponential default-time draws."""
    out = np.empty(n_paths)
    for start in range(0, n_paths, _CHUNK):
        count = min(_CHUNK, n_paths - start)
        keys = _path_keys(seed, start, count)
        out[start:start + count] = _uniform(_draw(keys, 0, 2))
    return out
