"""Reference computations that share no code path with the package."""

import numpy as np


def naive_dft(x):
    x = np.asarray(x, dtype=complex)
    K = x.size
    out = np.zeros(K, dtype=complex)
    m = np.arange(K)
    for k in range(K):
        # reduce k*m mod K before scaling keeps the phase exact
        out[k] = np.sum(x * np.exp(-2j * np.pi * ((k * m) % K) / K))
    return out


def closed_form_window(kind, K):
    m = np.arange(K)
    if kind == "rectangular":
        return np.ones(K)
    if kind == "hann":
        return 0.5 - 0.5 * np.cos(2 * np.pi * m / K)
    return 0.54 - 0.46 * np.cos(2 * np.pi * m / K)


def naive_stft(x, K, H, kind="hann"):
    """Double loop over frames n and bins k of sum_m w[m] x[m+nH] e^{-j2pi km/K}."""
    x = np.asarray(x, dtype=float)
    w = closed_form_window(kind, K)
    n_frames = (x.size - K) // H + 1
    m = np.arange(K)
    basis = np.exp(-2j * np.pi * ((np.arange(K // 2)[:, None] * m) % K) / K)
    X = np.zeros((K // 2, n_frames), dtype=complex)
    for n in range(n_frames):
        seg = w * x[n * H : n * H + K]
        for k in range(K // 2):
            X[k, n] = np.dot(basis[k], seg)
    return X


def pairwise_auc(scores, labels):
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    total = 0.0
    for p in pos:
        total += np.sum(p > neg) + 0.5 * np.sum(p == neg)
    return total / (pos.size * neg.size)


def gram_singular_values(A):
    """sqrt of the eigenvalues of A^T A (or A A^T, whichever is smaller)."""
    A = np.asarray(A, dtype=float)
    G = A.T @ A if A.shape[0] >= A.shape[1] else A @ A.T
    ev = np.linalg.eigvalsh(G)[::-1]
    return np.sqrt(np.clip(ev, 0, None))
