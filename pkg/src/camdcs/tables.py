"""Per-energy S-matrix tables and the column-file output catalog.

A table holds one collision energy's S^J values for J = 0 .. nread-1 together
with the reconstruction parameters carried in the per-energy input file:

    nread  niter  sht  jstart  jfin  inv  dxl      (header tokens)
    Re S^0   Im S^0
    ...
    Re S^(nread-1)   Im S^(nread-1)
    energy                                          (meV, final record)

The legacy `inv` field is read and ignored. The parser is token-based, so
one-pair-per-line and multi-column layouts are both accepted.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, replace
from pathlib import Path

from camdcs.errors import ParseError, ValidationError

# Keys of the column-file output catalog. The four 3D surfaces are emitted
# only when the matching emit_3d flag is set.
OUTPUT_CATALOG = (
    "dcs.pole", "dcs.zero", "dcs.traj", "dcs.resid",
    "dcs.xdcs", "dcs.nfdcs", "dcs.dcs3d", "dcs.prob3d", "dcs.ph3d",
    "phase", "funf", "gunf", "dcs.f3d", "dcs.g3d", "smprod", "inputvals",
    "dcs.nsind", "dcs.fsind", "dcs.sw",
    "dcs.fwind", "dcs.fw", "dcs.bwind", "dcs.bw",
    "dcs.swtind", "dcs.fwtind", "dcs.bwtind",
    "dcs.swsm", "dcs.fwsm", "dcs.bwsm", "smof", "smog",
)


@dataclass(frozen=True)
class SMatrixTable:
    """One collision energy's sampled S-matrix plus reconstruction parameters.

    s_values[J] is S^J for J = 0 .. nread-1 (dimensionless), energy in meV,
    jstart/jfin are 1-based indices into the point list selecting the
    sub-range used for reconstruction, sht shifts the grid, dxl is the
    half-width of the real-axis strip used during quadratic-phase extraction.
    """

    energy: float
    s_values: tuple
    niter: int
    sht: float
    jstart: int
    jfin: int
    dxl: float
    file_index: int = 1

    def __post_init__(self):
        object.__setattr__(self, "s_values", tuple(complex(s) for s in self.s_values))
        if self.nread < 2:
            raise ValidationError(f"need at least 2 partial waves, got {self.nread}")
        if not (1 <= self.jstart <= self.jfin <= self.nread):
            raise ValidationError(
                f"jstart/jfin range ({self.jstart}, {self.jfin}) invalid for nread={self.nread}"
            )
        if self.energy <= 0.0:
            raise ValidationError(f"energy must be positive, got {self.energy}")
        if self.dxl <= 0.0:
            raise ValidationError(f"dxl must be positive, got {self.dxl}")
        if self.niter < 1:
            raise ValidationError(f"niter must be >= 1, got {self.niter}")
        for j, s in enumerate(self.s_values):
            if not (math.isfinite(s.real) and math.isfinite(s.imag)):
                raise ValidationError(f"S^{j} is not finite: {s}")

    @property
    def nread(self):
        return len(self.s_values)

    def retained_j(self):
        """Integer J values used for reconstruction (jstart..jfin, 1-based)."""
        return tuple(range(self.jstart - 1, self.jfin))

    def retained_s(self):
        return self.s_values[self.jstart - 1 : self.jfin]


def _tokens_with_lines(path):
    toks = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            body = line.split("#", 1)[0]
            for t in body.split():
                toks.append((ln, t))
    return toks


def _take(toks, pos, conv, what, path):
    if pos >= len(toks):
        raise ParseError(f"{path}: unexpected end of file while reading {what}")
    ln, t = toks[pos]
    try:
        return conv(t), pos + 1
    except ValueError:
        raise ParseError(f"{path}:{ln}: malformed {what} token {t!r}") from None


def parse_energy_file(path, file_index=1):
    """Parse a per-energy input file into an SMatrixTable.

    Header carries nread, niter, sht, jstart, jfin, inv, dxl; `inv` is read
    and discarded. Raises ParseError naming the line on malformed tokens,
    including truncation (fewer than nread S-value pairs).
    """
    path = Path(path)
    if not path.exists():
        raise ParseError(f"{path}: no such file")
    toks = _tokens_with_lines(path)
    pos = 0
    nread, pos = _take(toks, pos, int, "nread", path)
    niter, pos = _take(toks, pos, int, "niter", path)
    sht, pos = _take(toks, pos, float, "sht", path)
    jstart, pos = _take(toks, pos, int, "jstart", path)
    jfin, pos = _take(toks, pos, int, "jfin", path)
    _inv, pos = _take(toks, pos, float, "inv", path)
    dxl, pos = _take(toks, pos, float, "dxl", path)
    if nread < 2:
        raise ValidationError(f"{path}: nread={nread} is too small")
    values = []
    for j in range(nread):
        if pos + 1 >= len(toks):
            raise ParseError(
                f"{path}: truncated S-value list, got {j} of {nread} pairs"
            )
        re, pos = _take(toks, pos, float, f"Re S^{j}", path)
        im, pos = _take(toks, pos, float, f"Im S^{j}", path)
        values.append(complex(re, im))
    energy, pos = _take(toks, pos, float, "energy", path)
    if energy <= 0.0:
        raise ValidationError(f"{path}: nonpositive energy {energy}")
    return SMatrixTable(
        energy=energy, s_values=tuple(values), niter=niter, sht=sht,
        jstart=jstart, jfin=jfin, dxl=dxl, file_index=file_index,
    )


def write_energy_file(table, path):
    """Write a table in the per-energy input format (full double precision)."""
    path = Path(path)
    lines = [
        f"{table.nread} {table.niter} {table.sht!r} {table.jstart} {table.jfin} -1 {table.dxl!r}"
    ]
    for s in table.s_values:
        lines.append(f"{s.real!r} {s.imag!r}")
    lines.append(f"{table.energy!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def add_noise(table, fac, seed):
    """Perturb each S^J by an independent complex value of modulus <= fac.

    The perturbation is uniform in the disk of radius fac, drawn from a
    deterministic generator seeded by `seed`; fac = 0 returns the table
    unchanged.
    """
    if fac < 0:
        raise ValidationError(f"noise magnitude must be >= 0, got {fac}")
    if fac == 0.0:
        return table
    rng = random.Random(seed)
    noisy = []
    for s in table.s_values:
        r = fac * math.sqrt(rng.random())
        phi = 2.0 * math.pi * rng.random()
        noisy.append(s + r * cmath.exp(1j * phi))
    return replace(table, s_values=tuple(noisy))


def write_column_file(name, records, output_dir, header=None):
    """Write whitespace-separated numeric columns for a catalog output.

    `name` must be a catalog key and `records` a rectangular list of rows.
    Values are written with 17 significant digits. An empty record list
    produces an empty file with no header.
    """
    if name not in OUTPUT_CATALOG:
        raise ValidationError(f"unknown output key {name!r}")
    records = [tuple(row) for row in records]
    if records:
        width = len(records[0])
        for i, row in enumerate(records):
            if len(row) != width:
                raise ValidationError(
                    f"{name}: row {i} has {len(row)} columns, expected {width}"
                )
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    try:
        with open(path, "w", encoding="utf-8") as fh:
            if records and header:
                fh.write(f"# {header}\n")
            for row in records:
                fh.write(" ".join(f"{float(v):.17g}" for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write output file {path}: {exc}") from exc
    return path
