# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo path kernel.

Implements exactly the counter-based generator and stepping scheme of
``_reference`` (same hash constants, same uniform mapping, same inverse-CDF
normals), with per-path early exit once a path is absorbed. See _reference
for the algorithm documentation.
"""

from libc.math cimport exp, log, sqrt, INFINITY

ctypedef unsigned long long u64

cdef u64 _GOLD = 0x9E3779B97F4A7C15ULL
cdef u64 _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 _MIX2 = 0x94D049BB133111EBULL
cdef u64 _STREAM = 0xD6E8FEB86659FD93ULL
cdef double _INV53 = 1.0 / 9007199254740992.0

cdef double _A0 = -3.969683028665376e+01, _A1 = 2.209460984245205e+02
cdef double _A2 = -2.759285104469687e+02, _A3 = 1.383577518672690e+02
cdef double _A4 = -3.066479806614716e+01, _A5 = 2.506628277459239e+00
cdef double _B0 = -5.447609879822406e+01, _B1 = 1.615858368580409e+02
cdef double _B2 = -1.556989798598866e+02, _B3 = 6.680131188771972e+01
cdef double _B4 = -1.328068155288572e+01
cdef double _C0 = -7.784894002430293e-03, _C1 = -3.223964580411365e-01
cdef double _C2 = -2.400758277161838e+00, _C3 = -2.549732539343734e+00
cdef double _C4 = 4.374664141464968e+00, _C5 = 2.938163982698783e+00
cdef double _D0 = 7.784695709041462e-03, _D1 = 3.224671290700398e-01
cdef double _D2 = 2.445134137142996e+00, _D3 = 3.754408661907416e+00
cdef double _P_LOW = 0.02425


cdef inline u64 _mix64(u64 z) nogil:
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


cdef inline u64 _path_key(u64 run_key, u64 path_id) nogil:
    return _mix64(((path_id + 1) * _MIX1) ^ run_key)


cdef inline u64 _draw(u64 path_key, u64 step, u64 stream) nogil:
    return _mix64(path_key ^ (step * _MIX2 + stream * _STREAM + _GOLD))


cdef inline double _uniform(u64 bits) nogil:
    return (<double>(bits >> 11) + 0.5) * _INV53


cdef inline double _norm_ppf(double p) nogil:
    cdef double q, r, num, den
    if p < _P_LOW:
        q = sqrt(-2.0 * log(p))
        num = ((((_C0 * q + _C1) * q + _C2) * q + _C3) * q + _C4) * q + _C5
        den = (((_D0 * q + _D1) * q + _D2) * q + _D3) * q + 1.0
        return num / den
    if p > 1.0 - _P_LOW:
        q = sqrt(-2.0 * log(1.0 - p))
        num = ((((_C0 * q + _C1) * q + _C2) * q + _C3) * q + _C4) * q + _C5
        den = (((_D0 * q + _D1) * q + _D2) * q + _D3) * q + 1.0
        return -num / den
    q = p - 0.5
    r = q * q
    num = ((((_A0 * r + _A1) * r + _A2) * r + _A3) * r + _A4) * r + _A5
    den = ((((_B0 * r + _B1) * r + _B2) * r + _B3) * r + _B4) * r + 1.0
    return num * q / den


def debug_draw(seed, path, step, stream):
    """Raw (bits, uniform) for one counter position; parity check hook."""
    cdef u64 run_key = _mix64(<u64>seed + _GOLD)
    cdef u64 bits = _draw(_path_key(run_key, <u64>path), <u64>step, <u64>stream)
    return int(bits), float(_uniform(bits))


def touch_stats(double log_dist, double drift, double sigma, double r,
                double maturity, long n_steps, u64 seed, long long n_paths,
                bint bridge):
    """First passage of y = log(S/b) to zero; see _reference.touch_stats."""
    cdef double dt = maturity / n_steps
    cdef double sig2 = sigma * sigma
    cdef double sqdt = sqrt(dt)
    cdef long long n_hit = 0
    cdef double sum_df = 0.0, sumsq_df = 0.0
    cdef double comp1 = 0.0, comp2 = 0.0  # Kahan compensation
    cdef u64 run_key = _mix64(seed + _GOLD)
    cdef u64 key
    cdef long long i
    cdef long k
    cdef double y, y1, z, u, dy, m, t_hit, df, term, tmp
    with nogil:
        for i in range(n_paths):
            key = _path_key(run_key, <u64>i)
            y = log_dist
            for k in range(1, n_steps + 1):
                z = _norm_ppf(_uniform(_draw(key, <u64>k, 0)))
                y1 = y + drift * dt + sigma * sqdt * z
                if bridge:
                    u = _uniform(_draw(key, <u64>k, 1))
                    dy = y1 - y
                    m = 0.5 * (y + y1 - sqrt(dy * dy - 2.0 * sig2 * dt * log(u)))
                    t_hit = (k - 0.5) * dt
                else:
                    m = y1
                    t_hit = k * dt
                if m <= 0.0:
                    n_hit += 1
                    df = exp(-r * t_hit)
                    term = df - comp1
                    tmp = sum_df + term
                    comp1 = (tmp - sum_df) - term
                    sum_df = tmp
                    term = df * df - comp2
                    tmp = sumsq_df + term
                    comp2 = (tmp - sumsq_df) - term
                    sumsq_df = tmp
                    break
                y = y1
    return n_hit, sum_df, sumsq_df


def progressive_stats(double log_spot, double[::1] log_barriers,
                      double[::1] losses, double drift, double sigma,
                      double r, double hazard, double maturity, long n_steps,
                      u64 seed, long long n_paths, bint bridge):
    """Barrier-ladder claim with jump to default; see _reference."""
    cdef long n_bar = log_barriers.shape[0]
    cdef double dt = maturity / n_steps
    cdef double sig2 = sigma * sigma
    cdef double sum_pay = 0.0, sumsq_pay = 0.0
    cdef double comp1 = 0.0, comp2 = 0.0
    cdef u64 run_key = _mix64(seed + _GOLD)
    cdef u64 key
    cdef long long i
    cdef long k, j
    cdef double tau, y, y1, z, u, dy, m, t_hit, t0, t1, dt_p, pay, left
    cdef double term, tmp
    cdef bint defaulting
    # suffix sums of losses still owed at default
    cdef double[64] suffix
    if n_bar >= 63:
        raise ValueError("too many barriers")
    suffix[n_bar] = 0.0
    for j in range(n_bar - 1, -1, -1):
        suffix[j] = suffix[j + 1] + losses[j]
    with nogil:
        for i in range(n_paths):
            key = _path_key(run_key, <u64>i)
            if hazard > 0.0:
                tau = -log(_uniform(_draw(key, 0, 2))) / hazard
            else:
                tau = INFINITY
            y = log_spot
            pay = 0.0
            j = 0
            while j < n_bar and log_spot <= log_barriers[j]:
                pay += losses[j]
                j += 1
            t0 = 0.0
            for k in range(1, n_steps + 1):
                if j >= n_bar:
                    break
                t1 = k * dt
                defaulting = tau < t1
                dt_p = (tau - t0) if defaulting else dt
                z = _norm_ppf(_uniform(_draw(key, <u64>k, 0)))
                y1 = y + drift * dt_p + sigma * sqrt(dt_p) * z
                if bridge:
                    u = _uniform(_draw(key, <u64>k, 1))
                    dy = y1 - y
                    m = 0.5 * (y + y1 - sqrt(dy * dy - 2.0 * sig2 * dt_p * log(u)))
                    t_hit = t0 + 0.5 * dt_p
                else:
                    m = y1
                    t_hit = t0 + dt_p
                while j < n_bar and m <= log_barriers[j]:
                    pay += losses[j] * exp(-r * t_hit)
                    j += 1
                if defaulting:
                    if j < n_bar:
                        pay += suffix[j] * exp(-r * tau)
                        j = n_bar
                    break
                y = y1
                t0 = t1
            term = pay - comp1
            tmp = sum_pay + term
            comp1 = (tmp - sum_pay) - term
            sum_pay = tmp
            term = pay * pay - comp2
            tmp = sumsq_pay + term
            comp2 = (tmp - sumsq_pay) - term
            sumsq_pay = tmp
    return sum_pay, sumsq_pay
