"""Finite strict partial orders and brute-force structure maps between them."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

Label = Hashable
PartialIso = Dict[Label, Label]


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class FinPoset:
    """A strict partial order on an ordered tuple of labels.

    Construction validates irreflexivity, transitivity and asymmetry, so a
    ``FinPoset`` in hand is always a strict order.  Use ``FinPoset.generate``
    to build from a generating relation (transitive closure is taken).
    """

    elements: Tuple[Label, ...]
    lt: FrozenSet[Tuple[Label, Label]]

    def __init__(self, elements: Iterable[Label], lt: Iterable[Tuple[Label, Label]] = (), check: bool = True):
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise PosetError("duplicate labels")
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "lt", frozenset((a, b) for a, b in lt))
        if check:
            self.validate()

    @classmethod
    def generate(cls, elements: Iterable[Label], pairs: Iterable[Tuple[Label, Label]]) -> "FinPoset":
        elements = tuple(elements)
        closure = transitive_closure(elements, pairs)
        return cls(elements, closure)

    @classmethod
    def chain(cls, labels: Sequence[Label]) -> "FinPoset":
        labels = tuple(labels)
        return cls(labels, [(a, b) for i, a in enumerate(labels) for b in labels[i + 1 :]])

    @classmethod
    def antichain(cls, labels: Sequence[Label]) -> "FinPoset":
        return cls(labels, ())

    # -- invariants ----------------------------------------------------------

    def validate(self) -> None:
        index = self.index
        for a, b in self.lt:
            if a not in index or b not in index:
                raise PosetError(f"pair ({a!r}, {b!r}) mentions an unknown label")
            if a == b:
                raise PosetError(f"reflexive pair on {a!r}")
        for a, b in self.lt:
            if (b, a) in self.lt:
                raise PosetError(f"asymmetry fails on {a!r}, {b!r}")
        up = self.up
        for a, b in self.lt:
            missing = up[b] - up[a]
            if missing:
                c = next(iter(missing))
                raise PosetError(f"transitivity fails: {a!r} < {b!r} < {c!r}")

    # -- cached views --------------------------------------------------------

    @property
    def index(self) -> Dict[Label, int]:
        d = self.__dict__.get("_index")
        if d is None:
            d = {x: i for i, x in enumerate(self.elements)}
            object.__setattr__(self, "_index", d)
        return d

    @property
    def up(self) -> Dict[Label, FrozenSet[Label]]:
        d = self.__dict__.get("_up")
        if d is None:
            acc = {x: set() for x in self.elements}
            for a, b in self.lt:
                acc[a].add(b)
            d = {x: frozenset(s) for x, s in acc.items()}
            object.__setattr__(self, "_up", d)
        return d

    @property
    def down(self) -> Dict[Label, FrozenSet[Label]]:
        d = self.__dict__.get("_down")
        if d is None:
            acc = {x: set() for x in self.elements}
            for a, b in self.lt:
                acc[b].add(a)
            d = {x: frozenset(s) for x, s in acc.items()}
            object.__setattr__(self, "_down", d)
        return d

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.index

    def less(self, a: Label, b: Label) -> bool:
        return (a, b) in self.lt

    def incomparable(self, a: Label, b: Label) -> bool:
        return a != b and (a, b) not in self.lt and (b, a) not in self.lt

    def compare(self, a: Label, b: Label) -> str:
        if a == b:
            return "equal"
        if (a, b) in self.lt:
            return "below"
        if (b, a) in self.lt:
            return "above"
        return "incomparable"

    def relabel(self, mapping: Dict[Label, Label]) -> "FinPoset":
        return FinPoset([mapping[x] for x in self.elements], [(mapping[a], mapping[b]) for a, b in self.lt])

    def hasse_edges(self) -> List[Tuple[Label, Label]]:
        """Covering pairs (transitive reduction), in label-index order."""
        up = self.up
        edges = []
        for a in self.elements:
            for b in self.elements:
                if (a, b) in self.lt and not any(c in up[a] and b in up[c] for c in up[a]):
                    edges.append((a, b))
        return edges

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        idx = self.index
        pairs = sorted(self.lt, key=lambda p: (idx[p[0]], idx[p[1]]))
        return {"elements": [str(x) for x in self.elements], "lt": [[str(a), str(b)] for a, b in pairs]}

    @classmethod
    def from_json(cls, obj) -> "FinPoset":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["elements"], [tuple(p) for p in obj["lt"]])

    def to_dot(self, name: str = "P") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for x in self.elements:
            lines.append(f'  "{x}";')
        for a, b in self.hasse_edges():
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def transitive_closure(elements: Sequence[Label], pairs: Iterable[Tuple[Label, Label]]) -> FrozenSet[Tuple[Label, Label]]:
    succ: Dict[Label, set] = {x: set() for x in elements}
    for a, b in pairs:
        succ[a].add(b)
    closure = set()
    for a in elements:
        seen = set()
        stack = list(succ[a])
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            stack.extend(succ[c])
        closure.update((a, c) for c in seen)
    return frozenset(closure)


def restrict(P: FinPoset, S: Iterable[Label]) -> FinPoset:
    S = set(S)
    unknown = S - set(P.elements)
    if unknown:
        raise PosetError(f"unknown labels {sorted(map(str, unknown))}")
    elements = [x for x in P.elements if x in S]
    return FinPoset(elements, [(a, b) for a, b in P.lt if a in S and b in S])


# -- embeddings ----------------------------------------------------------------


def _extend_ok(X: FinPoset, Y: FinPoset, phi: PartialIso, x: Label, y: Label) -> bool:
    for a, b in phi.items():
        if X.less(a, x) != Y.less(b, y) or X.less(x, a) != Y.less(y, b):
            return False
    return True


def _search_order(X: FinPoset) -> List[Label]:
    """Most-constrained-first placement order for the pattern's elements."""
    idx = X.index
    deg = {x: len(X.up[x]) + len(X.down[x]) for x in X.elements}
    placed: List[Label] = []
    rest = set(X.elements)
    while rest:
        def score(x):
            links = sum(1 for a in placed if X.less(a, x) or X.less(x, a))
            return (-links, -deg[x], idx[x])

        x = min(rest, key=score)
        placed.append(x)
        rest.discard(x)
    return placed


def iter_embeddings(X: FinPoset, Y: FinPoset) -> Iterator[PartialIso]:
    """Embeddings X -> Y, each produced once, in a deterministic order.

    The search places the most constrained pattern points first; use
    ``embeddings`` for the lexicographic order on target indices.
    """
    xs = _search_order(X)
    ys = Y.elements
    yidx = Y.index
    phi: PartialIso = {}
    used = set()

    def candidates(x):
        # intersect the up/down sets forced by already-placed points
        pool = None
        for a, b in phi.items():
            if X.less(a, x):
                s = Y.up[b]
            elif X.less(x, a):
                s = Y.down[b]
            else:
                continue
            pool = set(s) if pool is None else pool & s
            if not pool:
                return []
        if pool is None:
            return ys
        return sorted(pool, key=yidx.__getitem__)

    def backtrack(i):
        if i == len(xs):
            yield dict(phi)
            return
        x = xs[i]
        for y in candidates(x):
            if y in used or not _extend_ok(X, Y, phi, x, y):
                continue
            phi[x] = y
            used.add(y)
            yield from backtrack(i + 1)
            del phi[x]
            used.discard(y)

    yield from backtrack(0)


def embeddings(X: FinPoset, Y: FinPoset) -> List[PartialIso]:
    """All embeddings, in lexicographic order of target indices along X."""
    yidx = Y.index
    out = list(iter_embeddings(X, Y))
    out.sort(key=lambda f: [yidx[f[x]] for x in X.elements])
    return [{x: f[x] for x in X.elements} for f in out]


def find_embedding(X: FinPoset, Y: FinPoset) -> Optional[PartialIso]:
    return next(iter_embeddings(X, Y), None)


def is_isomorphic(X: FinPoset, Y: FinPoset) -> bool:
    if len(X) != len(Y) or len(X.lt) != len(Y.lt):
        return False
    return find_embedding(X, Y) is not None


def automorphisms(P: FinPoset) -> List[PartialIso]:
    return embeddings(P, P)


def is_partial_iso(P: FinPoset, phi: PartialIso, Q: Optional[FinPoset] = None) -> bool:
    Q = P if Q is None else Q
    if len(set(phi.values())) != len(phi):
        return False
    if any(a not in P or b not in Q for a, b in phi.items()):
        return False
    items = list(phi.items())
    for (a, fa), (b, fb) in itertools.product(items, repeat=2):
        if P.less(a, b) != Q.less(fa, fb):
            return False
    return True


def partial_isos(P: FinPoset) -> Iterator[PartialIso]:
    """All finite isomorphisms of P, by domain size then lexicographically."""
    els = P.elements
    for r in range(len(els) + 1):
        for dom in itertools.combinations(els, r):
            for img in itertools.permutations(els, r):
                phi = dict(zip(dom, img))
                if is_partial_iso(P, phi):
                    yield phi


def one_point_extensions(P: FinPoset, phi: PartialIso, x: Label) -> List[Label]:
    if x in phi:
        raise PosetError(f"{x!r} already in the domain")
    if x not in P:
        raise PosetError(f"unknown label {x!r}")
    taken = set(phi.values())
    return [y for y in P.elements if y not in taken and _extend_ok(P, P, phi, x, y)]


def is_ultrahomogeneous(P: FinPoset) -> Tuple[bool, Optional[PartialIso]]:
    """Every finite isomorphism extends to an automorphism; else a witness."""
    autos = automorphisms(P)
    for phi in partial_isos(P):
        if not any(all(f[a] == b for a, b in phi.items()) for f in autos):
            return False, phi
    return True, None


def is_ultrahomogeneous_by_extension(P: FinPoset) -> Tuple[bool, Optional[Tuple[PartialIso, Label]]]:
    """One-point-extension criterion: every phi extends to every new point."""
    for phi in partial_isos(P):
        for x in P.elements:
            if x not in phi and not one_point_extensions(P, phi, x):
                return False, (phi, x)
    return True, None


# -- canonical forms and ages ---------------------------------------------------

CANONICAL_LIMIT = 8


def canonical_form(P: FinPoset) -> str:
    """Minimal row-major adjacency string over all orderings of the elements.

    Exact (no hashing); size is capped at ``CANONICAL_LIMIT`` elements.
    """
    n = len(P)
    if n > CANONICAL_LIMIT:
        raise PosetError(f"canonical form limited to {CANONICAL_LIMIT} elements")
    els = P.elements
    best = None
    # process a permutation only while its prefix can still beat the best
    rel = [[(a, b) in P.lt for b in els] for a in els]

    def rec(order, bits):
        nonlocal best
        if best is not None and bits > best[: len(bits)]:
            return
        if len(order) == n:
            if best is None or bits < best:
                best = bits
            return
        m = len(order)
        for j in range(n):
            if j in order:
                continue
            # new row/column entries for position m, laid out so prefixes stay comparable
            add = "".join("1" if rel[order[i]][j] else "0" for i in range(m))
            add += "".join("1" if rel[j][order[i]] else "0" for i in range(m))
            rec(order + [j], bits + add)

    rec([], "")
    return f"{n}:{best}"


def poset_from_canonical(code: str) -> FinPoset:
    n_text, bits = code.split(":")
    n = int(n_text)
    pairs = []
    pos = 0
    for m in range(n):
        for i in range(m):
            if bits[pos] == "1":
                pairs.append((i, m))
            pos += 1
        for i in range(m):
            if bits[pos] == "1":
                pairs.append((m, i))
            pos += 1
    return FinPoset(range(n), pairs)


def age(P: FinPoset, k: int) -> set:
    if k < 1:
        raise ValueError("size bound must be >= 1")
    out = set()
    for r in range(1, min(k, len(P)) + 1):
        for S in itertools.combinations(P.elements, r):
            out.add(canonical_form(restrict(P, S)))
    return out


def all_posets(n: int) -> List[FinPoset]:
    """One representative per isomorphism type of n-element posets.

    Built by adding a maximal element over a down-closed subset of each
    (n-1)-element type; every finite poset has a maximal element.
    """
    if n == 0:
        return [FinPoset((), ())]
    seen = {}
    for Q in all_posets(n - 1):
        els = list(range(n - 1))
        for r in range(n):
            for S in itertools.combinations(els, r):
                s = set(S)
                if any(b in s and a not in s for a, b in Q.lt):
                    continue
                P = FinPoset(range(n), list(Q.lt) + [(a, n - 1) for a in S])
                seen.setdefault(canonical_form(P), P)
    return [seen[c] for c in sorted(seen)]
