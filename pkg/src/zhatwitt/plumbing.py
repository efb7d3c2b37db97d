"""Plumbing graphs and the homological data read off the adjacency matrix."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from . import linalg
from .errors import InvalidGraph, NotNegativeDefinite, SingularLinkingMatrix


@dataclass(frozen=True)
class PlumbingGraph:
    """Weighted tree (or graph) of genus-0 vertices.

    ``vertices`` is a tuple of ``(id, framing)`` and ``edges`` a tuple of
    id pairs.  Vertex order fixes the coordinate order of every vector used
    downstream.
    """

    vertices: tuple
    edges: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        ids = [v for v, _ in self.vertices]
        if not ids:
            raise InvalidGraph("graph has no vertices")
        if len(set(ids)) != len(ids):
            raise InvalidGraph("vertex ids must be unique")
        known = set(ids)
        seen = set()
        for a, b in self.edges:
            if a == b:
                raise InvalidGraph(f"self-loop at vertex {a}")
            if a not in known or b not in known:
                raise InvalidGraph(f"edge ({a}, {b}) references an unknown vertex")
            e = frozenset((a, b))
            if e in seen:
                raise InvalidGraph(f"duplicate edge ({a}, {b})")
            seen.add(e)
        if not self._connected():
            raise InvalidGraph("graph must be connected")

    def _connected(self) -> bool:
        adj = {v: set() for v, _ in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        start = self.vertices[0][0]
        stack, seen = [start], {start}
        while stack:
            for u in adj[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(adj)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_framings(cls, framings: Sequence[int], edges: Iterable = (), name: str = ""):
        return cls(tuple((i, int(f)) for i, f in enumerate(framings)),
                   tuple((int(a), int(b)) for a, b in edges), name)

    @classmethod
    def lens(cls, p: int) -> "PlumbingGraph":
        """Single vertex with framing -p."""
        return cls.from_framings([-p], name=f"lens_p{p}")

    @classmethod
    def star(cls, center: int, legs: Sequence[Sequence[int]], name: str = "") -> "PlumbingGraph":
        """Central vertex 0 with chains attached; each leg lists framings outward."""
        fr, edges = [center], []
        for leg in legs:
            prev = 0
            for a in leg:
                fr.append(a)
                edges.append((prev, len(fr) - 1))
                prev = len(fr) - 1
        return cls.from_framings(fr, edges, name)

    @classmethod
    def seifert(cls, e0: int, fibers: Sequence, name: str = "") -> "PlumbingGraph":
        """Seifert manifold ``M(e0 | b_1/a_1, ...)`` with ``0 < b_i/a_i < 1``.

        Each leg is the negative continued fraction of ``a_i / b_i``.
        """
        return cls.star(e0, [continued_fraction_leg(Fraction(f)) for f in fibers], name)

    @classmethod
    def brieskorn(cls, a1: int, a2: int, a3: int, name: str = "") -> "PlumbingGraph":
        """Negative definite plumbing of the Brieskorn sphere ``Sigma(a1, a2, a3)``."""
        if min(a1, a2, a3) < 2 or math.gcd(a1, a2) * math.gcd(a1, a3) * math.gcd(a2, a3) != 1:
            raise InvalidGraph("Brieskorn exponents must be pairwise coprime and at least 2")
        A = a1 * a2 * a3
        bs = []
        for a in (a1, a2, a3):
            inv = pow(A // a, -1, a)
            bs.append((-inv) % a)
        e0 = (-1 - sum(b * (A // a) for a, b in zip((a1, a2, a3), bs)))
        return cls.seifert(e0 // A, [Fraction(b, a) for a, b in zip((a1, a2, a3), bs)],
                           name or f"brieskorn_{a1}_{a2}_{a3}")

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"vertices": [{"id": v, "framing": f} for v, f in self.vertices],
                "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "PlumbingGraph":
        try:
            verts = tuple((int(v["id"]), int(v["framing"])) for v in data["vertices"])
            edges = tuple((int(a), int(b)) for a, b in data.get("edges", []))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidGraph(f"malformed graph JSON: {exc}") from None
        return cls(verts, edges, name or data.get("name", ""))

    @classmethod
    def load(cls, path) -> "PlumbingGraph":
        path = Path(path)
        return cls.from_json(json.loads(path.read_text()), name=path.stem)

    # -- basic data ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.vertices)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, (v, _) in enumerate(self.vertices)}

    @cached_property
    def degrees(self) -> tuple:
        deg = [0] * self.size
        for a, b in self.edges:
            deg[self.index[a]] += 1
            deg[self.index[b]] += 1
        return tuple(deg)

    @property
    def delta(self) -> tuple:
        """Degree parity vector."""
        return tuple(d % 2 for d in self.degrees)

    @property
    def framings(self) -> tuple:
        return tuple(f for _, f in self.vertices)

    @property
    def edge_indices(self) -> tuple:
        return tuple((self.index[a], self.index[b]) for a, b in self.edges)


def continued_fraction_leg(f: Fraction) -> list:
    """Framings ``[-k_1, -k_2, ...]`` with ``1/f = k_1 - 1/(k_2 - ...)``."""
    if not 0 < f < 1:
        raise InvalidGraph(f"Seifert fraction {f} must lie in (0, 1)")
    x, leg = 1 / f, []
    while True:
        k = -((-x.numerator) // x.denominator)  # ceil
        leg.append(-k)
        if k == x:
            return leg
        x = 1 / (k - x)


def adjacency_matrix(graph: PlumbingGraph) -> linalg.IntMatrix:
    n = graph.size
    B = [[0] * n for _ in range(n)]
    for i, f in enumerate(graph.framings):
        B[i][i] = f
    for i, j in graph.edge_indices:
        B[i][j] = B[j][i] = 1
    return linalg.as_int_matrix(B)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyData:
    graph: PlumbingGraph
    B: linalg.IntMatrix
    Binv: tuple
    det_abs: int
    invariant_factors: tuple
    b_plus: int
    b_minus: int
    definiteness: str  # "negative", "weak" or "indefinite"

    @property
    def d_Y(self) -> int:
        """Rank of H^1(Y; Z/3)."""
        return sum(1 for f in self.invariant_factors if f % 3 == 0)

    @property
    def group_order_parity(self) -> str:
        return "odd" if self.det_abs % 2 else "even"

    @property
    def torsion(self) -> tuple:
        """Nontrivial invariant factors of H_1."""
        return tuple(f for f in self.invariant_factors if f != 1)

    @property
    def is_cyclic(self) -> bool:
        return len(self.torsion) <= 1

    @property
    def signature(self) -> int:
        return self.b_plus - self.b_minus

    def linking_form(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        """``a^T B^{-1} b mod 1``."""
        n = len(a)
        v = sum(a[i] * self.Binv[i][j] * b[j] for i in range(n) for j in range(n))
        return v % 1

    def key(self, b: Sequence[int]) -> tuple:
        """Canonical label of the Spin^c class of ``b``: ``B^{-1} b mod 2``."""
        n = len(b)
        return tuple(sum(self.Binv[i][j] * b[j] for j in range(n)) % 2 for i in range(n))


def _weakly_negative(graph: PlumbingGraph, Binv) -> bool:
    hubs = [i for i, d in enumerate(graph.degrees) if d >= 3]
    sub = [[-Binv[i][j] for j in hubs] for i in hubs]
    try:
        linalg.ldl(sub)
        return True
    except NotNegativeDefinite:
        return False


def validate(graph: PlumbingGraph, weak: bool = False) -> HomologyData:
    """Homological data of ``Y(graph)``.

    Raises :class:`SingularLinkingMatrix` when ``b_1 > 0`` and
    :class:`NotNegativeDefinite` unless the form is negative definite
    (or, with ``weak=True``, weakly negative definite).
    """
    B = adjacency_matrix(graph)
    det = linalg.determinant(B)
    if det == 0:
        raise SingularLinkingMatrix("det B = 0, so b_1(Y) > 0")
    bp, bm, _ = linalg.signature(B)
    Binv = linalg.rational_inverse(B)
    if bp == 0:
        kind = "negative"
    elif _weakly_negative(graph, Binv):
        kind = "weak"
    else:
        kind = "indefinite"
    if kind != "negative":
        if weak and kind == "weak":
            warnings.warn("accepting a weakly negative definite plumbing", stacklevel=2)
        else:
            raise NotNegativeDefinite(f"adjacency form has b+ = {bp}")
    snf = linalg.smith_normal_form(B)
    return HomologyData(graph, B, Binv, abs(det), snf.invariant_factors, bp, bm, kind)


@dataclass(frozen=True)
class SpinCClass:
    index: int
    rep: tuple
    key: tuple
    conjugate: int

    @property
    def self_conjugate(self) -> bool:
        return self.conjugate == self.index


def spinc_reps(graph_or_data) -> list:
    """All Spin^c classes ``b = delta + 2x``, ``x`` running over ``Z^L / B Z^L``."""
    hd = _data(graph_or_data)
    delta = hd.graph.delta
    reps = [tuple(d + 2 * x for d, x in zip(delta, xs)) for xs in linalg.coset_reps(hd.B, 1)]
    keys = [hd.key(b) for b in reps]
    where = {k: i for i, k in enumerate(keys)}
    out = []
    for i, (b, k) in enumerate(zip(reps, keys)):
        conj = where[tuple((-x) % 2 for x in k)]
        out.append(SpinCClass(i, b, k, conj))
    return out


def conjugation_orbits(classes: Sequence[SpinCClass]) -> list:
    """Orbits of ``b -> -b`` as sorted index tuples, in order of first member."""
    seen, orbits = set(), []
    for c in classes:
        if c.index in seen:
            continue
        orb = tuple(sorted({c.index, c.conjugate}))
        seen.update(orb)
        orbits.append(orb)
    return orbits


def theta_reps(graph_or_data) -> list:
    """``c`` in ``{0,1}^L`` with ``B c = 0 (mod 2)``; the zero class is first."""
    hd = _data(graph_or_data)
    return linalg.kernel_mod2(hd.B)


def _data(x) -> HomologyData:
    return x if isinstance(x, HomologyData) else validate(x)


# ---------------------------------------------------------------------------
# bundled corpus


def corpus_dir():
    return resources.files("zhatwitt") / "corpus"


def load_corpus_graph(name: str) -> PlumbingGraph:
    """Bundled graph by stable name, e.g. ``"s3_m2_trefoil"``."""
    if name.startswith("lens_p"):
        p = int(name[len("lens_p"):])
        return PlumbingGraph.lens(p)
    path = corpus_dir() / f"{name}.json"
    if not path.is_file():
        raise InvalidGraph(f"no corpus graph named {name!r}")
    return PlumbingGraph.from_json(json.loads(path.read_text()), name=name)


def corpus_manifest() -> dict:
    return json.loads((corpus_dir() / "manifolds.json").read_text())


def corpus_graph_names() -> list:
    return sorted(p.name[:-5] for p in corpus_dir().iterdir()
                  if p.name.endswith(".json") and p.name != "manifolds.json"
                  and not p.name.endswith("_prefix.json"))


def corpus_series(name: str):
    """Bundled q-series prefix, e.g. ``"s3_m1_2_fig8_prefix"``."""
    from .qseries import QSeries

    path = corpus_dir() / f"{name}.json"
    if not path.is_file():
        raise InvalidGraph(f"no corpus series named {name!r}")
    return QSeries.loads(path.read_text())
