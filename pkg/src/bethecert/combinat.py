"""Skew diagrams, semistandard tableaux, Drinfeld polynomials and the cactus action.

Cells are ``(row, col)``, 1-based, content ``col - row``.  The Drinfeld
polynomial of a skew module at parameter z is ``P_k(u) = prod (u + c - z)``
over upper cells of columns of height k, matching the Yangian convention
``lambda_k / lambda_{k+1} = P_k(u+1) / P_k(u)`` on evaluation modules.
The omega-twisted skew construction realizes the 180-degree rotation of
the diagram instead; ``rotated_drinfeld_polynomials`` gives its data.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Sequence

from .exactlinalg import GaussQ, Poly, as_gq
from .glnrep import Weight
from .verify import FAIL, PASS, CertificateReport

__all__ = [
    "SkewDiagram",
    "SkewTableau",
    "CactusWord",
    "enumerate_skew_ssyt",
    "drinfeld_polynomials",
    "rotated_drinfeld_polynomials",
    "tensor_drinfeld",
    "assemble_disjoint_union",
    "bender_knuth",
    "berenstein_kirillov",
    "longest_word_interpretation",
    "apply_cactus",
    "check_cactus_relations",
]

Cell = tuple[int, int]


@dataclass(frozen=True)
class SkewDiagram:
    lam: tuple[int, ...]
    mu: tuple[int, ...]

    def __init__(self, lam: Weight | Sequence[int], mu: Weight | Sequence[int] = ()):
        lam_t = tuple(Weight(lam).entries)
        mu_t = tuple(Weight(mu).entries) if len(mu) else ()
        if len(mu_t) > len(lam_t):
            if any(mu_t[len(lam_t):]):
                raise ValueError("mu has more nonzero rows than lambda")
            mu_t = mu_t[: len(lam_t)]
        mu_t = mu_t + (0,) * (len(lam_t) - len(mu_t))
        if any(m > l for l, m in zip(lam_t, mu_t)):
            raise ValueError(f"mu = {mu_t} does not fit inside lambda = {lam_t}")
        object.__setattr__(self, "lam", lam_t)
        object.__setattr__(self, "mu", mu_t)

    @property
    def cells(self) -> list[Cell]:
        return [(r + 1, c + 1) for r, (l, m) in enumerate(zip(self.lam, self.mu)) for c in range(m, l)]

    def __len__(self) -> int:
        return sum(l - m for l, m in zip(self.lam, self.mu))

    @staticmethod
    def content(cell: Cell) -> int:
        return cell[1] - cell[0]

    def columns(self) -> dict[int, list[Cell]]:
        cols: dict[int, list[Cell]] = {}
        for cell in self.cells:
            cols.setdefault(cell[1], []).append(cell)
        return cols

    def __str__(self) -> str:
        lam = ",".join(map(str, self.lam))
        return f"({lam})/({','.join(map(str, self.mu))})" if any(self.mu) else f"({lam})"


@dataclass(frozen=True)
class SkewTableau:
    diagram: SkewDiagram
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != len(self.diagram):
            raise ValueError("one entry per cell required")

    def as_dict(self) -> dict[Cell, int]:
        return dict(zip(self.diagram.cells, self.entries))

    def is_semistandard(self) -> bool:
        t = self.as_dict()
        for (r, c), x in t.items():
            right = t.get((r, c + 1))
            below = t.get((r + 1, c))
            if right is not None and right < x:
                return False
            if below is not None and below <= x:
                return False
        return True

    def rows(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for (r, _), x in zip(self.diagram.cells, self.entries):
            out.setdefault(r, []).append(x)
        return [out[r] for r in sorted(out)]


def enumerate_skew_ssyt(d: SkewDiagram, n: int) -> list[SkewTableau]:
    """Semistandard fillings with entries in 1..n, lexicographic in row-major cell order."""
    cells = d.cells
    pos = {cell: k for k, cell in enumerate(cells)}
    out: list[SkewTableau] = []
    filling = [0] * len(cells)

    def rec(k: int):
        if k == len(cells):
            out.append(SkewTableau(d, tuple(filling)))
            return
        r, c = cells[k]
        lo = 1
        left = pos.get((r, c - 1))
        if left is not None:
            lo = max(lo, filling[left])
        up = pos.get((r - 1, c))
        if up is not None:
            lo = max(lo, filling[up] + 1)
        for x in range(lo, n + 1):
            filling[k] = x
            rec(k + 1)

    rec(0)
    return out


def drinfeld_polynomials(d: SkewDiagram, n: int, z=0) -> list[Poly]:
    """``P_1..P_{n-1}``: product of ``u + c(top) - z`` over columns of height k."""
    z = as_gq(z)
    polys = [Poly.const(1) for _ in range(n - 1)]
    for col in d.columns().values():
        k = len(col)
        if k <= n - 1:
            top = min(col)
            polys[k - 1] = polys[k - 1] * Poly.linear(as_gq(-SkewDiagram.content(top)) + z)
    return polys


def rotated_drinfeld_polynomials(d: SkewDiagram, n: int, z=0) -> list[Poly]:
    """``P_1..P_{n-1}`` with factors ``u - c(bottom) - z``.

    This is ``drinfeld_polynomials`` of the diagram turned by 180 degrees
    (up to a constant shift of contents), and it is what the highest-weight
    series of ``build_skew_module(lam, mu, z)`` produces.
    """
    z = as_gq(z)
    polys = [Poly.const(1) for _ in range(n - 1)]
    for col in d.columns().values():
        k = len(col)
        if k <= n - 1:
            bottom = max(col)
            polys[k - 1] = polys[k - 1] * Poly.linear(as_gq(SkewDiagram.content(bottom)) + z)
    return polys


def tensor_drinfeld(factors: Iterable[tuple[SkewDiagram, object]], n: int) -> list[Poly]:
    """Componentwise product of the factors' polynomials, each shifted by its parameter."""
    polys = [Poly.const(1) for _ in range(n - 1)]
    for d, z in factors:
        polys = [a * b for a, b in zip(polys, drinfeld_polynomials(d, n, z))]
    return polys


def _integral(z) -> int:
    q = as_gq(z)
    if q.im or q.re.denominator != 1:
        raise ValueError(f"parameter {z} is not an integer; no skew realization at parameter 0")
    return int(q.re)


def _trim(d: SkewDiagram) -> tuple[list[tuple[int, int]], int]:
    """Nonempty row span of ``d`` and the number of empty rows cut from the top."""
    rows = list(zip(d.lam, d.mu))
    while rows and rows[-1][0] == rows[-1][1]:
        rows.pop()
    top = 0
    while rows and rows[0][0] == rows[0][1]:
        rows.pop(0)
        top += 1
    return rows, top


def assemble_disjoint_union(factors: Sequence[tuple[SkewDiagram, object]]) -> SkewDiagram:
    """One skew diagram at parameter 0 that is the disjoint union of shifted factors.

    A factor at integral z is translated along the diagonal so that every
    content moves by -z; factors are stacked from north-east (smallest z)
    to south-west, with empty rows inserted where a factor must sit lower.
    Raises when two factors would touch.
    """
    items = sorted(((_integral(z), d) for d, z in factors), key=lambda t: t[0])
    lam: list[int] = []
    mu: list[int] = []
    for z, d in items:
        rows, top = _trim(d)
        if not rows:
            continue
        # first block row lands at absolute row R; a cell keeps content c - z
        # when columns move by R - top - z
        R = max(len(lam), top + z - min(m for _, m in rows))
        shift = R - top - z
        block = [(l + shift, m + shift) for l, m in rows]
        if lam and block[0][0] > mu[-1]:
            raise ValueError("factors are not far enough apart to form a disjoint union")
        pad = R - len(lam)
        lam += [block[0][0]] * pad + [l for l, _ in block]
        mu += [block[0][0]] * pad + [m for _, m in block]
    if not lam:
        return SkewDiagram((0,), (0,))
    return SkewDiagram(lam, mu)


def bender_knuth(t: SkewTableau, i: int, n: int | None = None) -> SkewTableau:
    """BK_i: swap the numbers of free i's and free (i+1)'s in every row."""
    top = max(t.entries, default=i + 1) if n is None else n
    if i < 1 or (n is not None and i > n - 1):
        raise ValueError(f"BK index {i} out of range for n = {top}")
    grid = t.as_dict()
    free: dict[Cell, bool] = {}
    for (r, c), x in grid.items():
        if x == i:
            free[(r, c)] = grid.get((r + 1, c)) != i + 1
        elif x == i + 1:
            free[(r, c)] = grid.get((r - 1, c)) != i
    new = dict(grid)
    by_row: dict[int, list[Cell]] = {}
    for cell, f in free.items():
        if f:
            by_row.setdefault(cell[0], []).append(cell)
    for r, cells in by_row.items():
        cells.sort(key=lambda cell: cell[1])
        a = sum(1 for cell in cells if grid[cell] == i)
        b = len(cells) - a
        for k, cell in enumerate(cells):
            new[cell] = i if k < b else i + 1
    return SkewTableau(t.diagram, tuple(new[cell] for cell in t.diagram.cells))


Interpretation = Callable[[int, int, int], list[int]]
"""``(p, q, n) -> BK indices``; the word acts right to left."""


def _s1q(q: int) -> list[int]:
    word: list[int] = []
    for top in range(1, q):
        word += list(range(top, 0, -1))
    return word


def berenstein_kirillov(p: int, q: int, n: int) -> list[int]:
    """s_{1,q} = t1 (t2 t1) ... (t_{q-1} ... t1) and s_{p,q} = s_{1,q} s_{1,q-p+1} s_{1,q}.

    Segment points are identified with tableau letters, so p = 0 has no BK image.
    """
    if p < 1:
        raise ValueError("the Bender-Knuth assignment covers segments with 1 <= p < q <= n only")
    if not p < q <= n:
        raise ValueError(f"bad segment [{p},{q}] for n = {n}")
    if p == 1:
        return _s1q(q)
    return _s1q(q) + _s1q(q - p + 1) + _s1q(q)


def longest_word_interpretation(p: int, q: int, n: int) -> list[int]:
    """Alternative: a reduced word of the reversal of [p, q] read in BK involutions."""
    if p < 1 or not p < q <= n:
        raise ValueError(f"bad segment [{p},{q}] for n = {n}")
    word: list[int] = []
    for top in range(q - 1, p - 1, -1):
        word += list(range(p, top + 1))
    return word


@dataclass(frozen=True)
class CactusWord:
    n: int
    generators: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        for p, q in self.generators:
            if not (0 <= p < q <= self.n):
                raise ValueError(f"s_{{{p},{q}}} out of range for n = {self.n}")

    def __mul__(self, other: "CactusWord") -> "CactusWord":
        if self.n != other.n:
            raise ValueError("cactus words for different n")
        return CactusWord(self.n, self.generators + other.generators)


def _bk_word(t: SkewTableau, word: Sequence[int], n: int) -> SkewTableau:
    for i in reversed(word):
        t = bender_knuth(t, i, n)
    return t


def apply_cactus(w: CactusWord, t: SkewTableau, interpretation: Interpretation = berenstein_kirillov) -> SkewTableau:
    for p, q in reversed(w.generators):
        t = _bk_word(t, interpretation(p, q, w.n), w.n)
    return t


def _perm(tabs: list[SkewTableau], w: CactusWord, interp: Interpretation) -> tuple[int, ...]:
    index = {t: k for k, t in enumerate(tabs)}
    return tuple(index[apply_cactus(w, t, interp)] for t in tabs)


def check_cactus_relations(d: SkewDiagram, n: int, interpretation: Interpretation = berenstein_kirillov,
                           families: Sequence[str] = ("involution", "commutation", "nesting")) -> CertificateReport:
    """Exhaustive check of the cactus relations as permutations of the SSYT set.

    Each family's verdict is in the witness; the report passes iff all requested families hold.
    """
    start = time.perf_counter()
    tabs = enumerate_skew_ssyt(d, n)
    ident = tuple(range(len(tabs)))
    segments = [(p, q) for p in range(1, n + 1) for q in range(p + 1, n + 1)]
    cache: dict[tuple[tuple[int, int], ...], tuple[int, ...]] = {}

    def perm(*gens: tuple[int, int]) -> tuple[int, ...]:
        if gens not in cache:
            cache[gens] = _perm(tabs, CactusWord(n, gens), interpretation)
        return cache[gens]

    results: dict[str, dict] = {}
    if "involution" in families:
        bad = [s for s in segments if perm(s, s) != ident]
        results["involution"] = {"holds": not bad, "instances": len(segments), "violations": [list(s) for s in bad]}
    if "commutation" in families:
        pairs = [(a, b) for a in segments for b in segments if a[1] < b[0]]
        bad = [(a, b) for a, b in pairs if perm(a, b) != perm(b, a)]
        results["commutation"] = {"holds": not bad, "instances": len(pairs), "violations": [[list(a), list(b)] for a, b in bad]}
    if "nesting" in families:
        triples = [(a, b) for a in segments for b in segments if a[0] <= b[0] < b[1] <= a[1]]
        bad = []
        for a, b in triples:
            rhs = (a[0] + a[1] - b[1], a[0] + a[1] - b[0])
            if perm(a, b, a) != perm(rhs):
                bad.append((a, b))
        results["nesting"] = {"holds": not bad, "instances": len(triples), "violations": [[list(a), list(b)] for a, b in bad]}
    ok = all(r["holds"] for r in results.values())
    inst = {"diagram": str(d), "n": n, "tableaux": len(tabs), "interpretation": getattr(interpretation, "__name__", "custom")}
    return CertificateReport("cactus_relations", inst, PASS if ok else FAIL, results, time.perf_counter() - start)
