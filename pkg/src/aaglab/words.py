"""Free-group words and samplers.

A word is an immutable, freely reduced sequence of nonzero signed letters:
+i denotes the i-th generator, -i its inverse. The empty word is the
identity. Arithmetic routes through the integer kernels in ``_kernels``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels as K

__all__ = [
    "Word",
    "IDENTITY",
    "word",
    "parse_word",
    "make_rng",
    "sphere_word",
    "ball_word",
    "random_tuple",
    "words_to_flat",
    "sphere_size",
    "ball_size",
]

_EMPTY = np.empty(0, dtype=np.int64)


class Word:
    """Immutable freely reduced word over signed integer letters."""

    __slots__ = ("_arr",)

    def __init__(self, letters: Iterable[int] = ()):
        arr = np.asarray(list(letters), dtype=np.int64)
        if arr.size and not np.all(arr != 0):
            raise ValueError("letters must be nonzero integers")
        self._arr = K.reduce_word(arr) if arr.size else _EMPTY
        self._arr.setflags(write=False)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Word":
        # Internal fast path: arr must already be freely reduced int64.
        w = cls.__new__(cls)
        w._arr = arr
        arr.setflags(write=False)
        return w

    @property
    def array(self) -> np.ndarray:
        """Read-only int64 view of the letters."""
        return self._arr

    @property
    def letters(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self._arr)

    @property
    def is_identity(self) -> bool:
        return self._arr.size == 0

    def max_generator(self) -> int:
        """Largest generator index appearing, 0 for the identity."""
        return int(np.abs(self._arr).max()) if self._arr.size else 0

    def __len__(self) -> int:
        return int(self._arr.size)

    def __iter__(self) -> Iterator[int]:
        return (int(x) for x in self._arr)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self._arr.size == other._arr.size and bool(
            np.array_equal(self._arr, other._arr)
        )

    def __hash__(self) -> int:
        return hash(self._arr.tobytes())

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word._wrap(K.concat_reduced(self._arr, other._arr))

    def inverse(self) -> "Word":
        return Word._wrap((-self._arr[::-1]).copy())

    def __invert__(self) -> "Word":
        return self.inverse()

    def __pow__(self, n: int) -> "Word":
        if n == 0 or self._arr.size == 0:
            return IDENTITY
        if n == 1:
            return self
        t = int(K.cyclic_strip(self._arr))
        conj = self._arr[:t]
        core = self._arr[t : self._arr.size - t]
        tile = core if n > 0 else (-core[::-1])
        out = np.concatenate([conj, np.tile(tile, abs(n)), -conj[::-1]])
        return Word._wrap(out)

    def conjugated_by(self, x: "Word") -> "Word":
        """x^-1 * self * x."""
        return Word._wrap(
            K.concat_reduced(
                K.concat_reduced((-x._arr[::-1]).copy(), self._arr), x._arr
            )
        )

    def cyclic_split(self) -> tuple["Word", "Word"]:
        """(prefix, core) with self = prefix * core * prefix^-1 and the
        core cyclically reduced."""
        if self._arr.size == 0:
            return IDENTITY, IDENTITY
        t = int(K.cyclic_strip(self._arr))
        return (
            Word._wrap(self._arr[:t].copy()),
            Word._wrap(self._arr[t : self._arr.size - t].copy()),
        )

    def cyclic_core(self) -> "Word":
        return self.cyclic_split()[1]

    def cancellation_with(self, other: "Word") -> int:
        """Letters cancelled when forming self * other."""
        return int(K.cancellation(self._arr, other._arr))

    def __repr__(self) -> str:
        return f"Word({self.letters})"

    def __str__(self) -> str:
        return format_word(self)


IDENTITY = Word._wrap(_EMPTY)


def word(*letters: int) -> Word:
    """Word from signed letters, freely reducing: word(1, 2, -2) == word(1)."""
    return Word(letters)


_LOWER = "abcdefghijklmnopqrstuvwxyz"


def parse_word(text: str) -> Word:
    """Letters a..z are generators 1..26, A..Z their inverses. Whitespace
    separated signed integers are accepted for higher ranks."""
    text = text.strip()
    if not text:
        return IDENTITY
    stripped = text.replace("-", "").replace(" ", "")
    if stripped and not stripped.isalpha():
        return Word(int(tok) for tok in text.split())
    out = []
    for ch in text:
        if ch.isspace():
            continue
        if ch in _LOWER:
            out.append(_LOWER.index(ch) + 1)
        elif ch.lower() in _LOWER:
            out.append(-(_LOWER.index(ch.lower()) + 1))
        else:
            raise ValueError(f"cannot parse letter {ch!r}")
    return Word(out)


def format_word(w: Word) -> str:
    """Inverse of parse_word; '1' denotes the identity."""
    if len(w) == 0:
        return "1"
    if w.max_generator() <= 26:
        return "".join(
            _LOWER[x - 1] if x > 0 else _LOWER[-x - 1].upper() for x in w
        )
    return " ".join(str(int(x)) for x in w.array)


# ---------------------------------------------------------------------------
# sampling


def make_rng(*seeds: int) -> np.random.Generator:
    """Deterministic generator from a tuple of integers."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seeds)))


def sphere_size(rank: int, length: int) -> int:
    """Number of freely reduced words of exactly this length."""
    if length == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (length - 1)


def ball_size(rank: int, max_length: int) -> int:
    """Number of freely reduced words of length at most max_length."""
    return sum(sphere_size(rank, ell) for ell in range(max_length + 1))


def sphere_word(rng: np.random.Generator, rank: int, length: int) -> Word:
    """Uniform over freely reduced words of exactly the given length."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if length == 0:
        return IDENTITY
    first = int(rng.integers(0, 2 * rank))
    rest = rng.integers(0, 2 * rank - 1, size=length - 1).astype(np.int64)
    return Word._wrap(K.fill_nonbacktracking(rank, first, rest))


def ball_word(rng: np.random.Generator, rank: int, max_length: int) -> Word:
    """Uniform over freely reduced words of length at most max_length."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    weights = np.array(
        [float(sphere_size(rank, ell)) for ell in range(max_length + 1)]
    )
    length = int(rng.choice(max_length + 1, p=weights / weights.sum()))
    return sphere_word(rng, rank, length)


def random_tuple(
    rng: np.random.Generator,
    rank: int,
    count: int | Sequence[int],
    length: int | Sequence[int],
    mode: str = "sphere",
) -> tuple[Word, ...]:
    """Tuple of independent random reduced words.

    count and length may be single values or inclusive [lo, hi] ranges; the
    count and each sphere length are drawn uniformly. mode 'ball' draws each
    word uniformly from the ball of the (drawn) radius instead.
    """
    if mode not in ("sphere", "ball"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    k = _draw(rng, count)
    out = []
    for _ in range(k):
        ell = _draw(rng, length)
        if mode == "sphere":
            out.append(sphere_word(rng, rank, ell))
        else:
            out.append(ball_word(rng, rank, ell))
    return tuple(out)


def _draw(rng: np.random.Generator, spec: int | Sequence[int]) -> int:
    if isinstance(spec, (int, np.integer)):
        return int(spec)
    lo, hi = spec
    if lo > hi:
        raise ValueError("range lower bound exceeds upper bound")
    return int(rng.integers(lo, hi + 1))


def words_to_flat(ws: Sequence[Word]) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate words into (flat letters, offsets) for kernel calls."""
    offs = np.zeros(len(ws) + 1, dtype=np.int64)
    for i, w in enumerate(ws):
        offs[i + 1] = offs[i] + len(w)
    flat = np.empty(int(offs[-1]), dtype=np.int64)
    for i, w in enumerate(ws):
        flat[offs[i] : offs[i + 1]] = w.array
    return flat, offs
