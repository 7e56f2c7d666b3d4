"""Pure-Python versions of the compiled kernels.

Same signatures and the same uniform consumption order as ``_kernels``;
used when the extension is not built or ``REANNEAL_PURE_PYTHON`` is set.
"""
from math import exp


def _rows(ptr, idx, jv):
    ptr = ptr.tolist()
    idx = idx.tolist()
    jv = jv.tolist()
    return [list(zip(idx[ptr[i]:ptr[i + 1]], jv[ptr[i]:ptr[i + 1]])) for i in range(len(ptr) - 1)]


def piqa_mcs(spins, h, ptr, idx, jv, b, jperp, pt, do_local, do_global, uniforms, snaps):
    n_slices, n = spins.shape
    per_mcs = (n_slices * n if do_local else 0) + (n if do_global else 0)
    if per_mcs == 0:
        return 0, 0
    n_mcs = uniforms.shape[0] // per_mcs
    record = snaps.shape[0] > 0
    if record and snaps.shape[0] < n_mcs:
        raise ValueError("snapshot buffer too small")
    rows = _rows(ptr, idx, jv)
    hl = h.tolist()
    z = spins.tolist()
    us = uniforms.tolist()
    u = 0
    local_acc = global_acc = 0
    for m in range(n_mcs):
        if do_local:
            for k in range(n_slices):
                zk = z[k]
                zp = z[(k + 1) % n_slices]
                zm = z[k - 1]
                for i in range(n):
                    f = hl[i]
                    for j, c in rows[i]:
                        f += c * zk[j]
                    d = 2.0 * zk[i] * (b * f + jperp * (zp[i] + zm[i]))
                    if d <= 0.0 or us[u] < exp(-d / pt):
                        zk[i] = -zk[i]
                        local_acc += 1
                    u += 1
        if do_global:
            for i in range(n):
                d = 0.0
                for k in range(n_slices):
                    zk = z[k]
                    f = hl[i]
                    for j, c in rows[i]:
                        f += c * zk[j]
                    d += 2.0 * zk[i] * b * f
                if d <= 0.0 or us[u] < exp(-d / pt):
                    for k in range(n_slices):
                        z[k][i] = -z[k][i]
                    global_acc += 1
                u += 1
        if record:
            snaps[m] = z
    spins[:] = z
    return local_acc, global_acc


def classical_sweeps(z, h, ptr, idx, jv, temps, uniforms):
    n = z.shape[0]
    n_sweeps = temps.shape[0]
    if uniforms.shape[0] < n_sweeps * n:
        raise ValueError("not enough uniforms")
    rows = _rows(ptr, idx, jv)
    hl = h.tolist()
    zl = z.tolist()
    us = uniforms.tolist()
    u = 0
    acc = 0
    for t in temps.tolist():
        for i in range(n):
            f = hl[i]
            for j, c in rows[i]:
                f += c * zl[j]
            d = 2.0 * zl[i] * f
            if t <= 0.0:
                if d < 0.0:
                    zl[i] = -zl[i]
                    acc += 1
            elif d <= 0.0 or us[u] < exp(-d / t):
                zl[i] = -zl[i]
                acc += 1
            u += 1
    z[:] = zl
    return acc
