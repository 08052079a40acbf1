"""Vectorized block transforms used by the split and recovery pipelines.

Operates on whole runs of blocks at once with numpy.  The per-block
semantics are defined by the scalar operations in `shamir`; the test
suite holds the two implementations equal.
"""

import numpy as np

from . import gf
from .shamir import EXTRA_WORDS, FieldPolicy, SchemeParams

_EXP2: np.ndarray | None = None  # (30, 510) doubled exp tables, uint8
_LOG: np.ndarray | None = None  # (30, 256) log tables, uint16; [f, 0] is junk


def _field_arrays() -> tuple[np.ndarray, np.ndarray]:
    global _EXP2, _LOG
    if _EXP2 is None:
        fields = gf.canonical_fields()
        exp2 = np.empty((len(fields), 510), dtype=np.uint8)
        log = np.zeros((len(fields), 256), dtype=np.uint16)
        for i, spec in enumerate(fields):
            e = np.array(gf.tables_for(spec).exp, dtype=np.uint8)
            exp2[i, :255] = e
            exp2[i, 255:] = e
            log[i, e] = np.arange(255, dtype=np.uint16)
        _EXP2, _LOG = exp2, log
    return _EXP2, _LOG


def _vmul(exp2, log, f, a, b):
    # f, a, b broadcast together; zero operands handled by the final mask
    prod = exp2[f, log[f, a] + log[f, b]]
    return np.where((a == 0) | (b == 0), 0, prod)


def derive_points(point_words: np.ndarray) -> np.ndarray:
    """Row-wise derive_eval_points: (B, n) words -> (B, n) distinct points."""
    nblocks, n = point_words.shape
    if n > 255:
        raise ValueError("cannot derive more than 255 distinct nonzero points")
    x = np.empty((nblocks, n), dtype=np.uint8)
    for i in range(n):
        cand = (point_words[:, i] % 255) + 1
        if i:
            coll = (x[:, :i] == cand[:, None]).any(axis=1)
            while coll.any():
                rows = np.flatnonzero(coll)
                cand[rows] = (cand[rows] % 255) + 1
                coll[rows] = (x[rows, :i] == cand[rows, None]).any(axis=1)
        x[:, i] = cand
    return x


def field_indices(field_words: np.ndarray, policy: FieldPolicy) -> np.ndarray:
    """(B, 4) words -> (B,) canonical field indices."""
    if policy == FieldPolicy.FIXED_CANONICAL:
        return np.zeros(field_words.shape[0], dtype=np.intp)
    w = field_words.astype(np.uint32)
    packed = (w[:, 0] << 24) | (w[:, 1] << 16) | (w[:, 2] << 8) | w[:, 3]
    return (packed % np.uint32(gf.field_count())).astype(np.intp)


def eval_blocks(coeffs: np.ndarray, points: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Horner evaluation: (B, m) coeffs at (B, n) points -> (B, n) words."""
    exp2, log = _field_arrays()
    m = coeffs.shape[1]
    fcol = f[:, None]
    acc = np.broadcast_to(coeffs[:, m - 1][:, None], points.shape).copy()
    for k in range(m - 2, -1, -1):
        acc = _vmul(exp2, log, fcol, acc, points) ^ coeffs[:, k][:, None]
    return acc


def interpolate_blocks(points: np.ndarray, values: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Per-block Vandermonde solve: (B, m) points and values -> (B, m) coeffs.

    Points within a row must be distinct and nonzero (guaranteed by
    derive_points), which keeps every pivot nonzero without row swaps.
    """
    exp2, log = _field_arrays()
    nblocks, m = points.shape
    fcol = f[:, None]
    aug = np.empty((nblocks, m, m + 1), dtype=np.uint8)
    aug[:, :, 0] = 1
    for j in range(1, m):
        aug[:, :, j] = _vmul(exp2, log, fcol, aug[:, :, j - 1], points)
    aug[:, :, m] = values
    for k in range(m):
        piv = aug[:, k, k]
        inv = exp2[f, 255 - log[f, piv]]
        aug[:, k, k:] = _vmul(exp2, log, fcol, aug[:, k, k:], inv[:, None])
        for r in range(m):
            if r == k:
                continue
            fac = aug[:, r, k]
            aug[:, r, k:] ^= _vmul(exp2, log, fcol, aug[:, k, k:], fac[:, None])
    return aug[:, :, m].copy()


def _randomness(
    params: SchemeParams, main_ks: bytes, aux_ks: bytes | None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split raw keystream bytes into (mask, point, field) word arrays."""
    n, m = params.n, params.m
    if aux_ks is None:
        arr = np.frombuffer(main_ks, dtype=np.uint8).reshape(-1, params.words_per_block)
        return arr[:, :m], arr[:, m : m + n], arr[:, m + n :]
    mask = np.frombuffer(main_ks, dtype=np.uint8).reshape(-1, m)
    aux = np.frombuffer(aux_ks, dtype=np.uint8).reshape(-1, n + EXTRA_WORDS)
    return mask, aux[:, :n], aux[:, n:]


def split_payloads(
    padded: bytes, params: SchemeParams, main_ks: bytes, aux_ks: bytes | None
) -> list[bytes]:
    """Transform padded plaintext into n per-share payload columns."""
    m = params.m
    data = np.frombuffer(padded, dtype=np.uint8).reshape(-1, m)
    mask, pw, fw = _randomness(params, main_ks, aux_ks)
    coeffs = data ^ mask
    x = derive_points(pw)
    f = field_indices(fw, params.field_policy)
    y = eval_blocks(coeffs, x, f)
    return [y[:, i].tobytes() for i in range(params.n)]


def recover_padded(
    payloads: list[bytes],
    indices: list[int],
    params: SchemeParams,
    main_ks: bytes,
    aux_ks: bytes | None,
) -> bytes:
    """Invert split_payloads for m payload columns with the given share indices."""
    mask, pw, fw = _randomness(params, main_ks, aux_ks)
    x = derive_points(pw)
    f = field_indices(fw, params.field_policy)
    xs = x[:, indices]
    ys = np.stack([np.frombuffer(p, dtype=np.uint8) for p in payloads], axis=1)
    coeffs = interpolate_blocks(xs, ys, f)
    return (coeffs ^ mask).tobytes()
