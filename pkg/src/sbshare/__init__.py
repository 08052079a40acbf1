"""Short secret sharing with repeatable keystreams.

Splits a message into n shares so that any m recover it, with
per-share storage close to len(message)/m plus a fixed seed-share
overhead.  Blocks of m words are masked with a deterministic
keystream and evaluated as polynomials at keystream-derived points
over keystream-selected GF(2^8) fields.
"""

from .rrsg import Algorithm, Seed, new_stream
from .scheme import PaddingError, Share, ShareSetError, combine, recover_range, split
from .shamir import FieldPolicy, SchemeParams
from .share_format import FormatError, decode_share, encode_share

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "FieldPolicy",
    "FormatError",
    "PaddingError",
    "SchemeParams",
    "Seed",
    "Share",
    "ShareSetError",
    "__version__",
    "combine",
    "decode_share",
    "encode_share",
    "new_stream",
    "recover_range",
    "split",
]
