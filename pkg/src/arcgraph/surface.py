"""Surfaces, edge coordinates and the mapping class action.

Edge coordinates are tuples of Python ints (arbitrary precision), one per
edge.  A class equal to a triangulation edge has weight ``-1`` on that edge
and ``0`` elsewhere.

A :class:`MappingClassWord` is a sequence of flips and relabellings whose
final triangulation is combinatorially the starting one.  Applying it to a
class rewrites the class through each flip and reads the result back on the
original triangulation, so a word ``w`` realises the mapping class that
sends the starting edges onto the edges named by the final relabelling.

Relabellings fix a mapping class only up to the automorphisms of the
triangulation that preserve every edge label (on the once-punctured torus,
the elliptic involution).  A ``frame`` step removes that ambiguity: it
identifies the current triangulation with the starting one and then applies
the ``k``-th label-preserving automorphism.  Twists loaded from a surface
file always end in a frame step and carry their exact inverse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence, Union

from .errors import MalformedInput, NotAnArc, NotFlippable
from .normal import (
    NormalPath,
    canonical_path,
    orient_like,
    reduce_path,
    resolve_paths,
    rewrite_through_flip,
)
from .triangulation import (
    Triangulation,
    flip_triangulation,
    puncture_classes,
    validate_triangulation,
)

EdgeCoordinates = tuple[int, ...]

Flip = tuple[str, int]
Relabel = tuple[str, tuple[int, ...]]
Frame = tuple[str, int]  # ("frame", k): identify with the start via automorphism k
Step = Union[Flip, Relabel, Frame]


def coordinate_kind(T: Triangulation, x: Sequence[int]) -> str:
    """``"multiarc"``, ``"multicurve"``, ``"mixed"`` or ``"empty"``."""
    _, comps = resolve_paths(T, x)
    kinds = {c.kind for c in comps}
    if not kinds:
        return "empty"
    if kinds == {"arc"}:
        return "multiarc"
    if kinds == {"curve"}:
        return "multicurve"
    return "mixed"


def flip(T: Triangulation, e: int):
    """Flip edge ``e``.

    Returns the new triangulation and a transfer function taking edge
    coordinates on ``T`` to coordinates of the same class on the new one.
    """
    new_T, data = flip_triangulation(T, e)

    def transfer(x: Sequence[int]) -> EdgeCoordinates:
        _, comps = resolve_paths(T, x)
        w = [0] * T.edges
        for comp in comps:
            p = rewrite_through_flip(T, data, comp.path, new_T)
            for i, v in enumerate(p.coords(new_T)):
                w[i] += v
        return tuple(w)

    return new_T, transfer


def _relabel_coords(x: Sequence[int], perm: Sequence[int]) -> EdgeCoordinates:
    out = [0] * len(x)
    for i, v in enumerate(x):
        out[perm[i]] = v
    return tuple(out)


def _check_perm(perm: Sequence[int], n: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise MalformedInput(f"{perm!r} is not a permutation of {n} edges")
    return perm


@dataclass(frozen=True)
class MappingClassWord:
    steps: tuple[Step, ...] = ()
    name: str = field(default="", compare=False)
    inverse_steps: tuple[Step, ...] | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.steps)

    def inverse(self) -> "MappingClassWord":
        name = f"({self.name})^-1" if self.name else ""
        if self.inverse_steps is not None:
            return MappingClassWord(self.inverse_steps, name, self.steps)
        out: list[Step] = []
        for kind, arg in reversed(self.steps):
            if kind == "flip":
                out.append(("flip", arg))
            elif kind == "relabel":
                inv = [0] * len(arg)
                for i, p in enumerate(arg):
                    inv[p] = i
                out.append(("relabel", tuple(inv)))
            else:
                raise ValueError("a framed word needs its exact inverse; build it with invert()")
        return MappingClassWord(tuple(out), name)

    def then(self, other: "MappingClassWord") -> "MappingClassWord":
        """Apply ``self`` first, then ``other``: the composite ``other o self``."""
        inv = None
        if self.inverse_steps is not None and other.inverse_steps is not None:
            inv = other.inverse_steps + self.inverse_steps
        elif not self.steps:
            inv = other.inverse_steps
        elif not other.steps:
            inv = self.inverse_steps
        return MappingClassWord(self.steps + other.steps, _join(other.name, self.name), inv)

    def __pow__(self, n: int) -> "MappingClassWord":
        if n < 0:
            return self.inverse() ** (-n)
        out = MappingClassWord((), "", ())
        for _ in range(n):
            out = out.then(self)
        return out

    def to_json(self) -> list:
        return [{k: list(a) if k == "relabel" else a} for k, a in self.steps]


def _join(a: str, b: str) -> str:
    if a and b:
        return a + b
    return a or b


IDENTITY = MappingClassWord((), "id", ())


def compose(*words: MappingClassWord) -> MappingClassWord:
    """Composite as a product of mapping classes: ``compose(f, g)`` is ``f o g``."""
    out = MappingClassWord()
    for w in reversed(words):
        out = out.then(w)
    return out


def parse_word(raw, n_edges: int, twists: Mapping[str, MappingClassWord] | None = None) -> MappingClassWord:
    """Build a word from JSON steps or a string of twist names.

    Strings are read as mapping class products: ``"RL"`` is ``R o L`` (apply
    ``L`` first); a lowercase letter names the inverse of the uppercase twist.
    JSON steps are ``{"flip": e}``, ``{"relabel": perm}``, ``{"frame": k}`` or
    ``{"twist": "RL"}``.
    """
    twists = twists or {}
    if isinstance(raw, MappingClassWord):
        return raw
    if isinstance(raw, str):
        parts = []
        for ch in raw:
            if ch in twists:
                parts.append(twists[ch])
            elif ch.upper() in twists and ch.islower():
                parts.append(twists[ch.upper()].inverse())
            else:
                raise MalformedInput(f"unknown twist {ch!r}")
        w = compose(*parts) if parts else IDENTITY
        return MappingClassWord(w.steps, raw, w.inverse_steps)
    if raw and all(isinstance(s, Mapping) and set(s) == {"twist"} for s in raw):
        w = compose(*(parse_word(s["twist"], n_edges, twists) for s in raw))
        return MappingClassWord(w.steps, "", w.inverse_steps)
    steps: list[Step] = []
    try:
        for s in raw:
            if "flip" in s:
                steps.append(("flip", int(s["flip"])))
            elif "relabel" in s:
                steps.append(("relabel", _check_perm(s["relabel"], n_edges)))
            elif "frame" in s:
                steps.append(("frame", int(s["frame"])))
            elif "twist" in s:
                steps.extend(parse_word(s["twist"], n_edges, twists).steps)
            else:
                raise MalformedInput(f"unknown step {s!r}")
    except (TypeError, KeyError) as exc:
        raise MalformedInput(str(exc)) from exc
    return MappingClassWord(tuple(steps))


def run_word(T: Triangulation, w: MappingClassWord, paths: Sequence[NormalPath] = ()):
    """Push a triangulation and some normal paths through the steps of ``w``."""
    cur = T
    paths = list(paths)
    for kind, arg in w.steps:
        if kind == "flip":
            if not cur.is_flippable(arg):
                raise NotFlippable(f"edge {arg} is not flippable here")
            new, data = flip_triangulation(cur, arg)
            paths = [rewrite_through_flip(cur, data, p, new) for p in paths]
            cur = new
        elif kind == "relabel":
            cur = cur.relabel(arg)
        else:
            autos = automorphisms(T)
            if not 0 <= arg < len(autos):
                raise MalformedInput(f"frame {arg} out of range: {len(autos)} automorphisms")
            iso = align(cur, T)
            auto = _extend(T, T, *autos[arg])
            paths = [_map_path(auto, _map_path(iso, p)) for p in paths]
            cur = T
    return cur, paths


def align(final: Triangulation, T: Triangulation) -> dict[int, tuple[int, int]]:
    """Isomorphism from ``final`` onto ``T`` preserving edge labels.

    Returns ``{f: (g, shift)}``: side ``s`` of triangle ``f`` of ``final``
    corresponds to side ``s + shift`` of triangle ``g`` of ``T``.  The image
    of triangle 0 is the first matching triangle of ``T`` that extends to a
    full isomorphism, which makes the choice deterministic.
    """
    labels = final.edge_labels()
    target = T.edge_labels()
    for g0 in range(T.F):
        for sh0 in range(3):
            if all(labels[0][s] == target[g0][(s + sh0) % 3] for s in range(3)):
                iso = _extend(final, T, g0, sh0)
                if iso is not None:
                    return iso
    raise MalformedInput("word does not return to the starting triangulation")


def _extend(final: Triangulation, T: Triangulation, g0: int, sh0: int):
    iso = {0: (g0, sh0)}
    stack = [0]
    while stack:
        f = stack.pop()
        g, sh = iso[f]
        for s in range(3):
            if final.edge(f, s) != T.edge(g, s + sh):
                return None
            f2, j = final.glue(f, s)
            g2, j2 = T.glue(g, s + sh)
            cand = (g2, (j2 - j) % 3)
            if f2 in iso:
                if iso[f2] != cand:
                    return None
            else:
                iso[f2] = cand
                stack.append(f2)
    if sorted(g for g, _ in iso.values()) != list(range(T.F)):
        return None
    return iso


def _map_path(iso, path: NormalPath) -> NormalPath:
    segs = []
    for t, a, b in path.segments:
        g, sh = iso[t]
        segs.append((g, (a + 2 * sh) % 6, (b + 2 * sh) % 6))
    return NormalPath(tuple(segs), path.closed)


_AUTOS: dict[Triangulation, list[tuple[int, int]]] = {}


def automorphisms(T: Triangulation) -> list[tuple[int, int]]:
    """Label-preserving automorphisms of ``T`` as images ``(g, shift)`` of triangle 0.

    The identity comes first.
    """
    if T not in _AUTOS:
        labels = T.edge_labels()
        out = []
        for g0 in range(T.F):
            for sh0 in range(3):
                if all(labels[0][s] == labels[g0][(s + sh0) % 3] for s in range(3)):
                    if _extend(T, T, g0, sh0) is not None:
                        out.append((g0, sh0))
        _AUTOS[T] = out
    return _AUTOS[T]


def _edge_paths(T: Triangulation) -> list[NormalPath]:
    out = []
    for e in range(T.edges):
        p = canonical_path(T, tuple(-1 if i == e else 0 for i in range(T.edges)))
        out += [p, p.reversed()]
    return out


def _acts_trivially(T: Triangulation, w: MappingClassWord) -> bool:
    # an automorphism fixing every oriented edge is the identity
    return all(apply_to_path(T, w, p) == p for p in _edge_paths(T))


def frame_word(T: Triangulation, w: MappingClassWord) -> MappingClassWord:
    """``w`` ending in a frame step, with its exact inverse attached."""
    steps = list(w.steps)
    if not steps or steps[-1][0] != "frame":
        steps.append(("frame", 0))
    body = [s for s in steps[:-1]]
    if any(k == "frame" for k, _ in body):
        raise MalformedInput("frame steps may only end a twist")
    fwd = MappingClassWord(tuple(steps), w.name)
    rev = MappingClassWord(tuple(body)).inverse().steps
    n = len(automorphisms(T))
    for i in range(n):
        for j in range(n):
            cand = (("frame", i),) + rev + (("frame", j),)
            if _acts_trivially(T, fwd.then(MappingClassWord(cand))):
                return MappingClassWord(fwd.steps, w.name, cand)
    raise MalformedInput("could not invert word")


def check_word(T: Triangulation, w: MappingClassWord) -> None:
    final, _ = run_word(T, w)
    align(final, T)


def apply_mapping_class(T: Triangulation, w: MappingClassWord, x: Sequence[int]) -> EdgeCoordinates:
    """Coordinates of the image of the class ``x`` under ``w``."""
    _, comps = resolve_paths(T, x)
    final, paths = run_word(T, w, [c.path for c in comps])
    align(final, T)
    out = [0] * T.edges
    for p in paths:
        for i, v in enumerate(p.coords(final)):
            out[i] += v
    return tuple(out)


def apply_to_path(T: Triangulation, w: MappingClassWord, path: NormalPath) -> NormalPath:
    """Image of an oriented normal path (the orientation is transported)."""
    final, (p,) = run_word(T, w, [path])
    iso = align(final, T)
    p = _map_path(iso, p)
    # re-canonicalise edge arcs, whose segment depends on the triangle order
    return reduce_path(T, p.segments, p.closed)


@dataclass(frozen=True)
class OrientedArc:
    """An arc class with a chosen endpoint (``end`` 0 or 1, canonical order)."""

    coords: EdgeCoordinates
    end: int = 0

    def path(self, T: Triangulation) -> NormalPath:
        p = canonical_path(T, self.coords)
        if p.closed:
            raise NotAnArc("class is a closed curve")
        return p if self.end == 0 else p.reversed()

    @classmethod
    def from_path(cls, T: Triangulation, path: NormalPath) -> "OrientedArc":
        canon, end = orient_like(T, path)
        return cls(canon.coords(T), end)

    def flipped(self) -> "OrientedArc":
        return OrientedArc(self.coords, 1 - self.end)


def transport_arc(T: Triangulation, w: MappingClassWord, a: OrientedArc) -> OrientedArc:
    return OrientedArc.from_path(T, apply_to_path(T, w, a.path(T)))


@dataclass(frozen=True)
class Surface:
    """A triangulation plus named twist words loaded from a surface file."""

    T: Triangulation
    twists: Mapping[str, MappingClassWord] = field(default_factory=dict)
    name: str = ""

    def word(self, raw) -> MappingClassWord:
        w = parse_word(raw, self.T.edges, self.twists)
        check_word(self.T, w)
        return w

    def to_json(self) -> dict:
        d = self.T.to_json()
        d["name"] = self.name
        d["twists"] = {k: v.to_json() for k, v in self.twists.items()}
        return d


def load_surface(src) -> Surface:
    """Read a surface from a JSON file path, JSON text or a parsed mapping."""
    if isinstance(src, Mapping):
        raw = src
    else:
        p = Path(src)
        try:
            text = p.read_text()
        except OSError as exc:
            raise MalformedInput(f"cannot read {src}: {exc}") from exc
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"{src}: {exc}") from exc
    if not isinstance(raw, Mapping):
        raise MalformedInput("surface file must hold a JSON object")
    T = validate_triangulation(dict(raw))
    twists: dict[str, MappingClassWord] = {}
    for name, steps in (raw.get("twists") or {}).items():
        w = parse_word(steps, T.edges, twists)
        check_word(T, w)
        if w.inverse_steps is None:
            w = frame_word(T, w)
        twists[name] = MappingClassWord(w.steps, name, w.inverse_steps)
    return Surface(T, twists, str(raw.get("name", "")))


def load_coordinates(src, T: Triangulation | None = None) -> EdgeCoordinates:
    """Read a coordinates file: ``{"format": 1, "weights": [...]}`` or a bare list."""
    if isinstance(src, (list, tuple)):
        raw = src
    else:
        try:
            raw = json.loads(Path(src).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedInput(f"cannot read coordinates {src}: {exc}") from exc
    if isinstance(raw, Mapping):
        if raw.get("format", 1) != 1:
            raise MalformedInput("unsupported coordinates format")
        raw = raw.get("weights")
    try:
        x = tuple(int(v) for v in raw)
    except (TypeError, ValueError) as exc:
        raise MalformedInput(f"bad coordinates: {exc}") from exc
    if T is not None and len(x) != T.edges:
        raise MalformedInput(f"expected {T.edges} weights, got {len(x)}")
    return x


def builtin_surface(name: str) -> Surface:
    """Load one of the bundled surfaces (``s11`` or ``s04``)."""
    here = Path(__file__).parent / "data" / f"{name}.json"
    if not here.exists():
        raise MalformedInput(f"no bundled surface {name!r}")
    return load_surface(here)


__all__ = [
    "EdgeCoordinates",
    "MappingClassWord",
    "OrientedArc",
    "Surface",
    "apply_mapping_class",
    "apply_to_path",
    "automorphisms",
    "frame_word",
    "builtin_surface",
    "coordinate_kind",
    "flip",
    "load_coordinates",
    "load_surface",
    "parse_word",
    "puncture_classes",
    "transport_arc",
    "validate_triangulation",
]
