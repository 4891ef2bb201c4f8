"""Algebra of time-periodic operators written as finite Fourier sums.

Two representations are provided.

``FourierOperator`` is the general form ``sum_k M_k exp(i w_k t)`` keyed by
frequency. ``GradedOperator`` is the form an interaction-frame operator takes
when the lab-frame Hamiltonian only carries harmonics of a single drive
frequency ``w``: entry (m, n) of sector ``p`` oscillates at
``E_m - E_n + p * w``. Products then reduce to plain matrix products that add
sector indices, which keeps fourth-order nested commutators cheap. The graded
form converts losslessly to the general one and both satisfy the same algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import PoleEntry, ResonancePole

MERGE_TOL = 1e-7
POLE_TOL = 1e-3


def _canonical(pairs: Iterable[tuple[float, np.ndarray]], merge_tol: float):
    pairs = [(float(w), np.asarray(m, dtype=complex)) for w, m in pairs]
    if not pairs:
        return []
    pairs.sort(key=lambda item: item[0])
    merged: list[list] = []
    for w, m in pairs:
        if merged and abs(w - merged[-1][2]) < merge_tol:
            group = merged[-1]
            group[1] = group[1] + m
            group[3].append(w)
            group[2] = w
        else:
            merged.append([w, m.copy(), w, [w]])
    out = []
    for _, m, _, members in merged:
        if np.any(m):
            out.append((float(np.mean(members)), m))
    return out


class FourierOperator:
    """Finite Fourier series ``sum_k M_k exp(i w_k t)`` with d x d matrices."""

    __slots__ = ("terms", "dim", "merge_tol")

    def __init__(self, terms: Mapping[float, np.ndarray] | Iterable[tuple[float, np.ndarray]] = (),
                 dim: int | None = None, merge_tol: float = MERGE_TOL):
        items = terms.items() if isinstance(terms, Mapping) else terms
        canon = _canonical(items, merge_tol)
        if dim is None:
            if not canon:
                raise ValueError("dim is required for an empty operator")
            dim = canon[0][1].shape[0]
        for _, m in canon:
            if m.shape != (dim, dim):
                raise ValueError(f"term of shape {m.shape} does not match dim {dim}")
        self.terms: tuple[tuple[float, np.ndarray], ...] = tuple(canon)
        self.dim = int(dim)
        self.merge_tol = merge_tol

    @classmethod
    def static(cls, matrix: np.ndarray) -> "FourierOperator":
        matrix = np.asarray(matrix, dtype=complex)
        return cls([(0.0, matrix)], dim=matrix.shape[0])

    @classmethod
    def zero(cls, dim: int) -> "FourierOperator":
        return cls([], dim=dim)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"FourierOperator(dim={self.dim}, n_terms={len(self.terms)})"

    def __add__(self, other: "FourierOperator") -> "FourierOperator":
        _check_dims(self, other)
        return FourierOperator(list(self.terms) + list(other.terms), dim=self.dim, merge_tol=self.merge_tol)

    def __sub__(self, other: "FourierOperator") -> "FourierOperator":
        return self + other.scale(-1.0)

    def __neg__(self) -> "FourierOperator":
        return self.scale(-1.0)

    def scale(self, factor: complex) -> "FourierOperator":
        return FourierOperator([(w, factor * m) for w, m in self.terms], dim=self.dim, merge_tol=self.merge_tol)

    def dagger(self) -> "FourierOperator":
        return FourierOperator([(-w, m.conj().T) for w, m in self.terms], dim=self.dim, merge_tol=self.merge_tol)

    def term(self, frequency: float) -> np.ndarray:
        """Coefficient at ``frequency`` (zero matrix if absent)."""
        for w, m in self.terms:
            if abs(w - frequency) < self.merge_tol:
                return m.copy()
        return np.zeros((self.dim, self.dim), dtype=complex)

    def evaluate(self, t: float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for w, m in self.terms:
            out += m * np.exp(1j * w * t)
        return out

    def derivative(self) -> "FourierOperator":
        return FourierOperator([(w, 1j * w * m) for w, m in self.terms], dim=self.dim, merge_tol=self.merge_tol)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return self.allclose(self.dagger(), atol=atol)

    def allclose(self, other: "FourierOperator", atol: float = 1e-12) -> bool:
        diff = self - other
        return all(np.max(np.abs(m)) <= atol for _, m in diff.terms)

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(m))) for _, m in self.terms), default=0.0)


def _check_dims(a: FourierOperator, b: FourierOperator) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def multiply(a: FourierOperator, b: FourierOperator) -> FourierOperator:
    """Frequency convolution: (M e^{i w1 t})(N e^{i w2 t}) = MN e^{i (w1 + w2) t}."""
    _check_dims(a, b)
    products = [(wa + wb, ma @ mb) for wa, ma in a.terms for wb, mb in b.terms]
    return FourierOperator(products, dim=a.dim, merge_tol=a.merge_tol)


def commutator(a: FourierOperator, b: FourierOperator) -> FourierOperator:
    return multiply(a, b) - multiply(b, a)


def antiderivative(a: FourierOperator, pole_tol: float = POLE_TOL) -> FourierOperator:
    """Zero-DC antiderivative: M e^{i w t} -> M / (i w) e^{i w t}.

    Raises ResonancePole if any term sits within ``pole_tol`` of zero frequency.
    """
    out = []
    for w, m in a.terms:
        if abs(w) < pole_tol:
            rows, cols = np.nonzero(m)
            entries = [PoleEntry(int(r), int(c), complex(m[r, c])) for r, c in zip(rows, cols)]
            raise ResonancePole(w, entries)
        out.append((w, m / (1j * w)))
    return FourierOperator(out, dim=a.dim, merge_tol=a.merge_tol)


def dc_part(a: FourierOperator) -> np.ndarray:
    return a.term(0.0)


@dataclass(frozen=True)
class BlockStructure:
    """Tensor-product layout and the factor whose space each block copies.

    Two basis states share a block when every factor other than ``target``
    holds the same level. Block-diagonal operators therefore act freely on the
    target factor and conserve the levels of all other factors.
    """

    dims: tuple[int, ...]
    target: int

    def __post_init__(self):
        if not 0 <= self.target < len(self.dims):
            raise ValueError("target index out of range")

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def levels(self) -> np.ndarray:
        """Array of shape (dim, n_factors) with the level of each factor."""
        return np.array(list(np.ndindex(*self.dims)), dtype=int).reshape(self.dim, len(self.dims))

    def labels(self) -> np.ndarray:
        lv = self.levels()
        others = [k for k in range(len(self.dims)) if k != self.target]
        if not others:
            return np.zeros(self.dim, dtype=int)
        return np.ravel_multi_index(tuple(lv[:, k] for k in others), tuple(self.dims[k] for k in others))

    def mask(self) -> np.ndarray:
        lab = self.labels()
        return lab[:, None] == lab[None, :]


def block_split(a: FourierOperator, blocks: BlockStructure) -> tuple[FourierOperator, FourierOperator]:
    if blocks.dim != a.dim:
        raise ValueError("block structure does not match operator dimension")
    mask = blocks.mask()
    b_part = FourierOperator([(w, np.where(mask, m, 0)) for w, m in a.terms], dim=a.dim, merge_tol=a.merge_tol)
    n_part = FourierOperator([(w, np.where(mask, 0, m)) for w, m in a.terms], dim=a.dim, merge_tol=a.merge_tol)
    return b_part, n_part


class GradedOperator:
    """Interaction-frame operator with entry (m, n) of sector p at E_m - E_n + p*w.

    ``sectors`` maps the integer drive-photon index p to a d x d matrix.
    """

    __slots__ = ("energies", "drive_freq", "sectors")

    def __init__(self, energies: np.ndarray, drive_freq: float, sectors: Mapping[int, np.ndarray]):
        self.energies = np.asarray(energies, dtype=float)
        self.drive_freq = float(drive_freq)
        self.sectors = {int(p): np.asarray(m, dtype=complex) for p, m in sectors.items() if np.any(m)}

    @property
    def dim(self) -> int:
        return self.energies.size

    def like(self, sectors: Mapping[int, np.ndarray]) -> "GradedOperator":
        return GradedOperator(self.energies, self.drive_freq, sectors)

    def frequencies(self, p: int, energies: np.ndarray | None = None) -> np.ndarray:
        e = self.energies if energies is None else energies
        return e[:, None] - e[None, :] + p * self.drive_freq

    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        out = {p: m.copy() for p, m in self.sectors.items()}
        for p, m in other.sectors.items():
            out[p] = out[p] + m if p in out else m.copy()
        return self.like(out)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + other.scale(-1.0)

    def scale(self, factor: complex) -> "GradedOperator":
        return self.like({p: factor * m for p, m in self.sectors.items()})

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        out: dict[int, np.ndarray] = {}
        for p, a in self.sectors.items():
            for q, b in other.sectors.items():
                prod = a @ b
                out[p + q] = out[p + q] + prod if p + q in out else prod
        return self.like(out)

    def commutator(self, other: "GradedOperator") -> "GradedOperator":
        return (self @ other) - (other @ self)

    def masked(self, mask: np.ndarray) -> "GradedOperator":
        return self.like({p: np.where(mask, m, 0) for p, m in self.sectors.items()})

    def split(self, blocks: BlockStructure) -> tuple["GradedOperator", "GradedOperator"]:
        mask = blocks.mask()
        return self.masked(mask), self.masked(~mask)

    def antiderivative(self, pole_tol: float = POLE_TOL, zero_tol: float = 0.0) -> "GradedOperator":
        """Divide each entry by i times its frequency; near-zero frequencies are poles.

        Entries whose magnitude does not exceed ``zero_tol`` are dropped instead
        of being tested against the pole tolerance.
        """
        out = {}
        for p, m in self.sectors.items():
            freq = self.frequencies(p)
            live = np.abs(m) > zero_tol
            bad = live & (np.abs(freq) < pole_tol)
            if np.any(bad):
                rows, cols = np.nonzero(bad)
                worst = np.argmin(np.abs(freq[rows, cols]))
                entries = [PoleEntry(int(r), int(c), complex(m[r, c]), photons=p) for r, c in zip(rows, cols)]
                raise ResonancePole(float(freq[rows[worst], cols[worst]]), entries)
            safe = np.where(live, freq, 1.0)
            out[p] = np.where(live, m / (1j * safe), 0)
        return self.like(out)

    def derivative(self) -> "GradedOperator":
        return self.like({p: 1j * self.frequencies(p) * m for p, m in self.sectors.items()})

    def static(self, frame_energies: np.ndarray | None = None, tol: float = MERGE_TOL) -> np.ndarray:
        """Sum of entries that are static in the frame defined by ``frame_energies``."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for p, m in self.sectors.items():
            freq = self.frequencies(p, frame_energies)
            out += np.where(np.abs(freq) < tol, m, 0)
        return out

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(m))) for m in self.sectors.values()), default=0.0)

    def to_fourier(self, merge_tol: float = MERGE_TOL) -> FourierOperator:
        pairs = []
        for p, m in self.sectors.items():
            pairs.extend(_split_by_frequency(m, self.frequencies(p), merge_tol))
        return FourierOperator(pairs, dim=self.dim, merge_tol=merge_tol)


def _split_by_frequency(m: np.ndarray, freq: np.ndarray, merge_tol: float):
    """Group the nonzero entries of ``m`` into one matrix per (rounded) frequency."""
    rows, cols = np.nonzero(m)
    if rows.size == 0:
        return []
    f = freq[rows, cols]
    keys = np.round(f / merge_tol).astype(np.int64)
    pairs = []
    for key in np.unique(keys):
        sel = keys == key
        mat = np.zeros(m.shape, dtype=complex)
        mat[rows[sel], cols[sel]] = m[rows[sel], cols[sel]]
        pairs.append((float(np.mean(f[sel])), mat))
    return pairs


def interaction_frame(h0: np.ndarray, hint: FourierOperator) -> FourierOperator:
    """Move ``hint`` to the frame of diagonal ``h0``: entry (m, n) gains E_m - E_n."""
    energies = np.real(np.diag(h0)) if np.ndim(h0) == 2 else np.asarray(h0, dtype=float)
    gaps = energies[:, None] - energies[None, :]
    pairs = []
    for w, m in hint.terms:
        pairs.extend(_split_by_frequency(m, w + gaps, hint.merge_tol))
    return FourierOperator(pairs, dim=hint.dim, merge_tol=hint.merge_tol)
