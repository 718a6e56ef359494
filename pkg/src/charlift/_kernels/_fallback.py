"""Pure numpy versions of the hot loops. Same signatures as the compiled module."""

import numpy as np


def trapezoid_moment(k: int, a: complex, nodes: int) -> complex:
    idx = np.arange(nodes)
    z = np.exp(2j * np.pi * idx / nodes)
    # z^(k+1) from the exact integer phase, not from repeated multiplication
    zk = np.exp(2j * np.pi * ((idx * ((k + 1) % nodes)) % nodes) / nodes)
    return complex(np.sum(zk / (z - a)) / nodes)


def chamber_products(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    first = h[:, :1]
    last = h[:, -1:]
    mid = h[:, 1:-1]
    return np.prod((1.0 - first / mid) * (1.0 - mid / last), axis=1)


def omega_sum(logs: np.ndarray, left: np.ndarray, right: np.ndarray, a: float, b: float) -> complex:
    logs = np.asarray(logs, dtype=complex)
    h = np.exp(logs)
    diff = h[:, None] - h[None, :]
    np.fill_diagonal(diff, 1.0)
    rowprod = np.prod(diff, axis=1)
    total = np.sum(logs)
    acc = 0j
    for i in np.asarray(left, dtype=np.int64):
        for j in np.asarray(right, dtype=np.int64):
            if i == j:
                continue
            num = np.exp(total + (a - 1.0) * logs[i] + (b - 1.0) * logs[j])
            acc += num * (h[j] - h[i]) / (rowprod[i] * rowprod[j])
    return complex(acc)
