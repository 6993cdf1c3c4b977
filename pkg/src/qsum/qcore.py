"""q-factorials, q-Pochhammer symbols at integer powers of q, q-binomials.

q-binomials are built with the Pascal recurrence

    [n, k] = [n-1, k-1] + q**k [n-1, k]

which needs no division.  ``qbinom_product`` is the independent
``(q)_n / ((q)_k (q)_{n-k})`` route kept for cross-checking.
"""

from __future__ import annotations

import io
import logging
import struct
from math import comb
from pathlib import Path
from typing import BinaryIO

from .exact import ONE, ZERO, LaurentPoly, lp_div_exact, lp_eval, one_minus_q_pow

log = logging.getLogger(__name__)

__all__ = [
    "QBinomTable",
    "TABLE",
    "qfac",
    "inv_qfac_is_zero",
    "qpoch",
    "qbinom",
    "qbinom_product",
    "binom_int",
    "qmultinomial",
    "save_cache",
    "load_cache",
]


def inv_qfac_is_zero(n: int) -> bool:
    """``1/(q)_n`` vanishes exactly when ``n < 0``."""
    return n < 0


def qfac(n: int) -> LaurentPoly:
    """``(q)_n = (1-q)(1-q^2)...(1-q^n)``."""
    if n < 0:
        raise ValueError(f"(q)_n undefined as a polynomial for n={n}; use inv_qfac_is_zero")
    return TABLE.qfac(n)


def qpoch(e: int, k: int) -> LaurentPoly:
    """``(q^e; q)_k = prod_{i<k} (1 - q^(e+i))`` for any integer ``e``."""
    if k < 0:
        raise ValueError("qpoch needs k >= 0")
    if e <= 0 < e + k:
        return ZERO
    if e == 1:
        return TABLE.qfac(k)
    acc = ONE
    for i in range(k):
        acc = acc * one_minus_q_pow(e + i)
    return acc


def binom_int(n: int, k: int) -> int:
    """``C(n, k)`` for ``0 <= k <= n`` and ``0`` otherwise."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


class QBinomTable:
    """Append-only memo of q-binomials and q-factorials.

    Keys are normalized to ``k <= n - k`` using ``[n, k] = [n, n-k]``.
    """

    def __init__(self) -> None:
        self._qbinom: dict[tuple[int, int], LaurentPoly] = {}
        self._qfac: list[LaurentPoly] = [ONE]

    def __len__(self) -> int:
        return len(self._qbinom)

    def qfac(self, n: int) -> LaurentPoly:
        facs = self._qfac
        while len(facs) <= n:
            facs.append(facs[-1] * one_minus_q_pow(len(facs)))
        return facs[n]

    def qbinom(self, n: int, k: int) -> LaurentPoly:
        if k < 0 or n < 0 or k > n:
            return ZERO
        if 2 * k > n:
            k = n - k
        if k == 0:
            return ONE
        key = (n, k)
        hit = self._qbinom.get(key)
        if hit is not None:
            return hit
        # Fill the column of rows needed iteratively to avoid deep recursion.
        start = n
        while start - 1 >= 2 * k and (start - 1, k) not in self._qbinom:
            start -= 1
        for m in range(start, n + 1):
            val = self._pascal(m, k)
            self._qbinom[(m, k)] = val
        return self._qbinom[key]

    def _pascal(self, n: int, k: int) -> LaurentPoly:
        # [n, k] = [n-1, k-1] + q^k [n-1, k]
        return self.qbinom(n - 1, k - 1) + self.qbinom(n - 1, k).shift(k)

    def items(self):
        return sorted(self._qbinom.items())

    def insert(self, n: int, k: int, value: LaurentPoly) -> None:
        if 2 * k > n:
            k = n - k
        self._qbinom.setdefault((n, k), value)

    def fill(self, n_max: int) -> None:
        """Precompute every ``[n, k]`` with ``n <= n_max`` (before parallel use)."""
        for n in range(n_max + 1):
            for k in range(n // 2 + 1):
                self.qbinom(n, k)


TABLE = QBinomTable()


def qbinom(n: int, k: int) -> LaurentPoly:
    """Gaussian binomial ``[n, k]``; zero unless ``0 <= k <= n``."""
    return TABLE.qbinom(n, k)


def qbinom_product(n: int, k: int) -> LaurentPoly:
    """``[n, k]`` by exact division of q-factorials (oracle route)."""
    if k < 0 or n < 0 or k > n:
        return ZERO
    num = ONE
    for i in range(n - k + 1, n + 1):
        num = num * one_minus_q_pow(i)
    return lp_div_exact(num, _plain_qfac(k))


def _plain_qfac(n: int) -> LaurentPoly:
    acc = ONE
    for i in range(1, n + 1):
        acc = acc * one_minus_q_pow(i)
    return acc


def qmultinomial(total: int, parts) -> LaurentPoly:
    """``(q)_total / prod (q)_p``; zero if any part is negative."""
    parts = list(parts)
    if any(inv_qfac_is_zero(p) for p in parts):
        return ZERO
    if sum(parts) != total:
        raise ValueError("parts must sum to total")
    acc = ONE
    rest = total
    for p in parts:
        acc = acc * qbinom(rest, p)
        rest -= p
    return acc


# -- cache file ----------------------------------------------------------
#
# Layout (all integers little-endian):
#   magic  b"QBINOM\0" + u8 version (=1)
#   u32 record count
#   per record: u32 n, u32 k, u32 coefficient count,
#               then per coefficient: u32 byte length + unsigned magnitude
# Coefficients of [n, k] are positive, stored from q^0 upward.

_MAGIC = b"QBINOM\x00"
_VERSION = 1


def save_cache(path, table: QBinomTable | None = None) -> int:
    table = TABLE if table is None else table
    buf = io.BytesIO()
    items = table.items()
    buf.write(_MAGIC + bytes([_VERSION]))
    buf.write(struct.pack("<I", len(items)))
    for (n, k), poly in items:
        buf.write(struct.pack("<III", n, k, len(poly.coeffs)))
        for c in poly.coeffs:
            raw = c.to_bytes((c.bit_length() + 7) // 8 or 1, "little")
            buf.write(struct.pack("<I", len(raw)))
            buf.write(raw)
    Path(path).write_bytes(buf.getvalue())
    return len(items)


def _read_exact(fh: BinaryIO, n: int) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise ValueError("truncated cache file")
    return data


def _parse_cache(data: bytes) -> list[tuple[int, int, LaurentPoly]]:
    fh = io.BytesIO(data)
    head = _read_exact(fh, len(_MAGIC) + 1)
    if head[:-1] != _MAGIC:
        raise ValueError("bad magic")
    if head[-1] != _VERSION:
        raise ValueError(f"unsupported cache version {head[-1]}")
    (count,) = struct.unpack("<I", _read_exact(fh, 4))
    records = []
    for _ in range(count):
        n, k, ncoef = struct.unpack("<III", _read_exact(fh, 12))
        coeffs = []
        for _ in range(ncoef):
            (blen,) = struct.unpack("<I", _read_exact(fh, 4))
            coeffs.append(int.from_bytes(_read_exact(fh, blen), "little"))
        records.append((n, k, LaurentPoly(coeffs)))
    if fh.read(1):
        raise ValueError("trailing bytes after last record")
    return records


def _plausible(n: int, k: int, poly: LaurentPoly) -> bool:
    # Cheap structural checks; the cache is advisory and never trusted blindly.
    if not 0 <= k <= n:
        return False
    if poly.min_exp != 0 or poly.max_exp != k * (n - k):
        return False
    if poly.coeffs != poly.coeffs[::-1] or any(c <= 0 for c in poly.coeffs):
        return False
    return lp_eval(poly, 1) == comb(n, k)


def load_cache(path, table: QBinomTable | None = None, verify: bool = True) -> int:
    """Merge a cache file into ``table``.  Returns the number of records used.

    A missing, corrupt or implausible file is ignored with a warning.
    With ``verify`` every record is also compared against the recurrence.
    """
    table = TABLE if table is None else table
    try:
        records = _parse_cache(Path(path).read_bytes())
    except FileNotFoundError:
        return 0
    except (OSError, ValueError, struct.error) as exc:
        log.warning("ignoring q-binomial cache %s: %s", path, exc)
        return 0
    for n, k, poly in records:
        if not _plausible(n, k, poly):
            log.warning("ignoring q-binomial cache %s: bad record (%d, %d)", path, n, k)
            return 0
    if verify:
        fresh = QBinomTable()
        for n, k, poly in records:
            if fresh.qbinom(n, k) != poly:
                log.warning("ignoring q-binomial cache %s: record (%d, %d) differs", path, n, k)
                return 0
    for n, k, poly in records:
        table.insert(n, k, poly)
    return len(records)
