"""Permutations of {0..N-1} with composition, inversion, and string actions."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Permutation:
    """A permutation stored as its image array: i -> image[i] (0-based)."""

    image: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        if sorted(self.image) != list(range(n)):
            raise ValueError(f"{self.image} is not a bijection on 0..{n - 1}")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """(self * other)(i) = self(other(i))."""
        return Permutation(tuple(self.image[other.image[i]] for i in range(self.n)))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(self.image[i] == i for i in range(self.n))

    def cycle_type(self) -> tuple[int, ...]:
        seen = [False] * self.n
        cycles = []
        for i in range(self.n):
            if seen[i]:
                continue
            ln, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = self.image[j]
                ln += 1
            cycles.append(ln)
        return tuple(sorted(cycles, reverse=True))

    def apply_to_string(self, x) -> tuple:
        """Move the symbol at position i to position image[i]."""
        if len(x) != self.n:
            raise ValueError("length mismatch")
        out = [None] * self.n
        for i, sym in enumerate(x):
            out[self.image[i]] = sym
        return tuple(out)


def transposition(n: int, i: int, j: int) -> Permutation:
    img = list(range(n))
    img[i], img[j] = img[j], img[i]
    return Permutation(tuple(img))
