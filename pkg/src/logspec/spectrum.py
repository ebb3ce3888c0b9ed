"""Ordered energy spectra with degeneracies.

:class:`Spectrum` is the common currency between the solver, the
prime-oscillator enumeration, the asymptotic fits, and the pairing
detector.  Levels are stored as a strictly ascending energy array plus an
integer degeneracy per level; CSV serialization uses the columns
(n, E, degeneracy) at 12 significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

#: relative tolerance for merging numerically split levels into one degenerate level
DEGENERACY_MERGE_RTOL = 1e-8

_CSV_HEADER = "n,E,degeneracy"


@dataclass(frozen=True)
class Spectrum:
    energies: np.ndarray
    degeneracies: np.ndarray
    label: str = ""
    energy_unit: str = "natural"

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        d = np.asarray(self.degeneracies, dtype=np.int64)
        if e.ndim != 1 or e.size == 0:
            raise ValueError("spectrum needs a non-empty 1D energy array")
        if d.shape != e.shape:
            raise ValueError("degeneracies must match energies in shape")
        if not np.all(np.isfinite(e)):
            raise ValueError("energies must be finite")
        if np.any(np.diff(e) <= 0):
            raise ValueError("energies must be strictly ascending")
        if np.any(d < 1):
            raise ValueError("degeneracies must be >= 1")
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "degeneracies", d)

    @classmethod
    def from_energies(cls, energies, label: str = "", energy_unit: str = "natural",
                      merge_rtol: float = DEGENERACY_MERGE_RTOL) -> "Spectrum":
        """Build a spectrum from raw (possibly repeated) energies.

        Energies closer than ``merge_rtol`` relative are merged into a single
        level whose degeneracy counts the merged entries.
        """
        raw = np.sort(np.asarray(energies, dtype=float))
        if raw.size == 0:
            raise ValueError("spectrum needs at least one energy")
        levels = [raw[0]]
        counts = [1]
        for e in raw[1:]:
            prev = levels[-1]
            if e - prev <= merge_rtol * max(abs(e), abs(prev)):
                counts[-1] += 1
            else:
                levels.append(e)
                counts.append(1)
        return cls(np.array(levels), np.array(counts), label=label, energy_unit=energy_unit)

    @property
    def n_levels(self) -> int:
        return int(self.energies.size)

    @property
    def n_states(self) -> int:
        return int(self.degeneracies.sum())

    def expanded(self) -> np.ndarray:
        """Energies repeated by degeneracy: entry n-1 is the n-th state's energy."""
        return np.repeat(self.energies, self.degeneracies)

    def partition_sum(self, beta: float) -> float:
        """Sum over levels of degeneracy * exp(-beta * E)."""
        if not (beta > 0):
            raise ValueError("beta must be positive")
        return float(np.sum(self.degeneracies * np.exp(-beta * self.energies)))

    def shifted(self, delta: float) -> "Spectrum":
        return replace(self, energies=self.energies + float(delta))

    def scaled(self, factor: float) -> "Spectrum":
        if not (factor > 0):
            raise ValueError("scale factor must be positive")
        return replace(self, energies=self.energies * float(factor))

    def to_csv(self, header_lines: tuple[str, ...] = ()) -> str:
        out = [f"# {line}" for line in header_lines]
        out.append(_CSV_HEADER)
        for i, (e, d) in enumerate(zip(self.energies, self.degeneracies), start=1):
            out.append(f"{i},{e:.12g},{int(d)}")
        return "\n".join(out) + "\n"

    def write_csv(self, path, header_lines: tuple[str, ...] = ()) -> None:
        Path(path).write_text(self.to_csv(header_lines))

    @classmethod
    def read_csv(cls, path, label: str | None = None) -> "Spectrum":
        lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
        rows = [ln for ln in lines if ln and not ln.startswith("#")]
        if not rows or rows[0] != _CSV_HEADER:
            raise ValueError(f"not a spectrum CSV (missing '{_CSV_HEADER}' header): {path}")
        energies, degs = [], []
        for row in rows[1:]:
            _, e, d = row.split(",")
            energies.append(float(e))
            degs.append(int(d))
        return cls(np.array(energies), np.array(degs),
                   label=label if label is not None else str(path))
