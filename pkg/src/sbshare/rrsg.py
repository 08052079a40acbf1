"""Deterministic, seekable keystream generators.

A stream is an unbounded sequence of words (one word = one byte) fully
determined by a 44-byte seed: the same seed and algorithm always yield
the same sequence, and any position can be reached directly with
``seek`` without regenerating the prefix.

Two algorithms are provided:

* ``Algorithm.CHACHA20`` - the ChaCha20 keystream (20 rounds, 32-byte
  key, 12-byte nonce, 32-bit block counter starting at 0).  This is the
  production choice; seeking costs one block computation.
* ``Algorithm.TEST_LCG`` - a 64-bit linear congruential generator kept
  for portable golden tests.  It is trivially predictable and MUST NOT
  be used to protect real data.
"""

import secrets
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

KEY_LEN = 32
NONCE_LEN = 12
SEED_LEN = KEY_LEN + NONCE_LEN


class Algorithm(IntEnum):
    """Keystream algorithm ids as stored in share headers."""

    CHACHA20 = 0
    TEST_LCG = 1


@dataclass(frozen=True)
class Seed:
    """Key material for one stream: 32 key bytes plus a 12-byte nonce."""

    key: bytes
    nonce: bytes

    def __post_init__(self):
        if len(self.key) != KEY_LEN:
            raise ValueError(f"key must be {KEY_LEN} bytes")
        if len(self.nonce) != NONCE_LEN:
            raise ValueError(f"nonce must be {NONCE_LEN} bytes")

    @classmethod
    def generate(cls) -> "Seed":
        """Fresh seed from system entropy."""
        return cls(secrets.token_bytes(KEY_LEN), secrets.token_bytes(NONCE_LEN))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Seed":
        if len(data) != SEED_LEN:
            raise ValueError(f"serialized seed must be {SEED_LEN} bytes")
        return cls(bytes(data[:KEY_LEN]), bytes(data[KEY_LEN:]))

    def to_bytes(self) -> bytes:
        return self.key + self.nonce


class RrsgStream:
    """Base contract: read consecutive words, seek to any word offset."""

    algorithm: Algorithm

    def __init__(self):
        self._pos = 0

    @property
    def position(self) -> int:
        """Current word offset from the start of the stream."""
        return self._pos

    def seek(self, word_offset: int) -> None:
        """Reposition so the next read starts at the given absolute offset."""
        if word_offset < 0:
            raise ValueError("cannot seek before the start of the stream")
        self._pos = word_offset

    def read(self, count: int) -> bytes:
        raise NotImplementedError


# -- ChaCha20 ----------------------------------------------------------

_CHACHA_BLOCK = 64
_CHACHA_CONST = np.array(
    [0x61707865, 0x3320646E, 0x79622D32, 0x6B206574], dtype=np.uint32
)
# Cap working-set size when generating long runs: 16384 blocks = 1 MiB.
_MAX_BATCH_BLOCKS = 16384


def _rotl(v, r):
    return (v << np.uint32(r)) | (v >> np.uint32(32 - r))


def _quarter_round(x, a, b, c, d):
    x[a] += x[b]
    x[d] = _rotl(x[d] ^ x[a], 16)
    x[c] += x[d]
    x[b] = _rotl(x[b] ^ x[c], 12)
    x[a] += x[b]
    x[d] = _rotl(x[d] ^ x[a], 8)
    x[c] += x[d]
    x[b] = _rotl(x[b] ^ x[c], 7)


def _chacha20_blocks(key: bytes, nonce: bytes, first_block: int, nblocks: int) -> bytes:
    """Keystream of nblocks 64-byte blocks starting at the given counter.

    State layout per block: 4 constant words, 8 key words, the 32-bit
    block counter, 3 nonce words; all words little-endian.  Whole batches
    of blocks are computed at once as numpy column vectors.
    """
    if first_block + nblocks > 1 << 32:
        raise ValueError("block counter space exhausted")
    state = np.empty((16, nblocks), dtype=np.uint32)
    state[0:4] = _CHACHA_CONST[:, None]
    state[4:12] = np.frombuffer(key, dtype="<u4")[:, None]
    state[12] = np.arange(first_block, first_block + nblocks, dtype=np.uint64).astype(
        np.uint32
    )
    state[13:16] = np.frombuffer(nonce, dtype="<u4")[:, None]
    x = state.copy()
    for _ in range(10):
        _quarter_round(x, 0, 4, 8, 12)
        _quarter_round(x, 1, 5, 9, 13)
        _quarter_round(x, 2, 6, 10, 14)
        _quarter_round(x, 3, 7, 11, 15)
        _quarter_round(x, 0, 5, 10, 15)
        _quarter_round(x, 1, 6, 11, 12)
        _quarter_round(x, 2, 7, 8, 13)
        _quarter_round(x, 3, 4, 9, 14)
    x += state
    return np.ascontiguousarray(x.T).astype("<u4").tobytes()


class _ChaCha20Stream(RrsgStream):
    algorithm = Algorithm.CHACHA20

    def __init__(self, seed: Seed):
        super().__init__()
        self._key = seed.key
        self._nonce = seed.nonce

    def read(self, count: int) -> bytes:
        if count < 0:
            raise ValueError("count must be non-negative")
        if count == 0:
            return b""
        out = bytearray()
        pos = self._pos
        remaining = count
        while remaining:
            block, offset = divmod(pos, _CHACHA_BLOCK)
            nblocks = min(
                (offset + remaining + _CHACHA_BLOCK - 1) // _CHACHA_BLOCK,
                _MAX_BATCH_BLOCKS,
            )
            chunk = _chacha20_blocks(self._key, self._nonce, block, nblocks)
            take = min(remaining, len(chunk) - offset)
            out += chunk[offset : offset + take]
            pos += take
            remaining -= take
        self._pos = pos
        return bytes(out)


# -- Test LCG ----------------------------------------------------------

_LCG_MUL = 6364136223846793005
_LCG_INC = 1442695040888963407
_MASK64 = (1 << 64) - 1
_LCG_BATCH = 4096


def _lcg_jump(state: int, steps: int) -> int:
    """State after applying the recurrence `steps` times, in O(log steps)."""
    a, c = _LCG_MUL, _LCG_INC
    a_acc, c_acc = 1, 0
    while steps:
        if steps & 1:
            a_acc = a_acc * a & _MASK64
            c_acc = (c_acc * a + c) & _MASK64
        c = c * (a + 1) & _MASK64
        a = a * a & _MASK64
        steps >>= 1
    return (state * a_acc + c_acc) & _MASK64


def _lcg_stride_tables() -> tuple[np.ndarray, np.ndarray]:
    # A[i], C[i] such that s_{k+i+1} = A[i]*s_k + C[i] (mod 2^64)
    a = np.empty(_LCG_BATCH, dtype=np.uint64)
    c = np.empty(_LCG_BATCH, dtype=np.uint64)
    am, cm = _LCG_MUL, _LCG_INC
    for i in range(_LCG_BATCH):
        a[i] = am
        c[i] = cm
        am = am * _LCG_MUL & _MASK64
        cm = (cm * _LCG_MUL + _LCG_INC) & _MASK64
    return a, c


_LCG_A_POW: np.ndarray | None = None
_LCG_C_POW: np.ndarray | None = None


class _TestLcgStream(RrsgStream):
    """64-bit LCG emitting one byte per step: s <- s*a + c; output (s >> 33) & 0xFF.

    Seeded from the first 8 key bytes, big-endian; the nonce is unused.
    Here for cross-implementation golden tests only - NOT secure.
    """

    algorithm = Algorithm.TEST_LCG

    def __init__(self, seed: Seed):
        super().__init__()
        global _LCG_A_POW, _LCG_C_POW
        if _LCG_A_POW is None:
            _LCG_A_POW, _LCG_C_POW = _lcg_stride_tables()
        self._initial = int.from_bytes(seed.key[:8], "big")
        self._state = self._initial

    def seek(self, word_offset: int) -> None:
        super().seek(word_offset)
        self._state = _lcg_jump(self._initial, word_offset)

    def read(self, count: int) -> bytes:
        if count < 0:
            raise ValueError("count must be non-negative")
        if count == 0:
            return b""
        out = bytearray()
        state = np.uint64(self._state)
        remaining = count
        while remaining:
            k = min(remaining, _LCG_BATCH)
            states = _LCG_A_POW[:k] * state + _LCG_C_POW[:k]
            out += ((states >> np.uint64(33)) & np.uint64(0xFF)).astype(np.uint8).tobytes()
            state = states[-1]
            remaining -= k
        self._state = int(state)
        self._pos += count
        return bytes(out)


_STREAM_CLASSES = {
    Algorithm.CHACHA20: _ChaCha20Stream,
    Algorithm.TEST_LCG: _TestLcgStream,
}


def new_stream(seed: Seed, algorithm: Algorithm | int) -> RrsgStream:
    """Stream positioned at word 0 for the given seed and algorithm."""
    try:
        alg = Algorithm(algorithm)
    except ValueError:
        raise ValueError(f"unknown keystream algorithm id {algorithm!r}") from None
    return _STREAM_CLASSES[alg](seed)
