"""Box covers of a coordinate domain and their nerves."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product

from ..cartan import Q, Space


def _sort_sign(idx):
    arr = list(idx)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    return tuple(arr), sign


class DegenerateCover(ValueError):
    pass


@dataclass(frozen=True)
class CechCover:
    """Finitely many open boxes with rational endpoints.

    ``boxes[i]`` is a tuple of ``(lo, hi)`` per axis.  Overlap lists contain
    only index tuples (increasing) whose common intersection has nonempty
    interior.
    """

    space: Space
    boxes: tuple
    domain: tuple | None = None
    pairs: tuple = field(init=False)
    triples: tuple = field(init=False)
    quads: tuple = field(init=False)

    def __post_init__(self):
        if not self.space.is_poly:
            raise DegenerateCover("Čech covers live on polynomial spaces")
        boxes = tuple(tuple((Q(lo), Q(hi)) for lo, hi in b) for b in self.boxes)
        if not boxes:
            raise DegenerateCover("cover needs at least one box")
        for b in boxes:
            if len(b) != self.space.n or any(lo >= hi for lo, hi in b):
                raise DegenerateCover(f"box {b} is empty or has wrong dimension")
        object.__setattr__(self, "boxes", boxes)
        dom = self.domain
        if dom is None:
            dom = tuple((min(b[a][0] for b in boxes), max(b[a][1] for b in boxes)) for a in range(self.space.n))
        object.__setattr__(self, "domain", tuple((Q(lo), Q(hi)) for lo, hi in dom))
        m = len(boxes)
        object.__setattr__(self, "pairs", tuple(t for t in combinations(range(m), 2) if self.meets(t)))
        object.__setattr__(self, "triples", tuple(t for t in combinations(range(m), 3) if self.meets(t)))
        object.__setattr__(self, "quads", tuple(t for t in combinations(range(m), 4) if self.meets(t)))
        if not self.covers_domain():
            raise DegenerateCover("boxes do not cover the working domain")
        if not self.connected():
            raise DegenerateCover("nerve of the cover is disconnected")

    @property
    def size(self) -> int:
        return len(self.boxes)

    def meets(self, idx) -> bool:
        for a in range(self.space.n):
            lo = max(self.boxes[i][a][0] for i in idx)
            hi = min(self.boxes[i][a][1] for i in idx)
            if lo >= hi:
                return False
        return True

    def covers_domain(self) -> bool:
        # every cell of the grid cut out by all endpoints must lie in some box
        cuts = []
        for a in range(self.space.n):
            lo, hi = self.domain[a]
            pts = sorted({lo, hi} | {v for b in self.boxes for v in b[a] if lo < v < hi})
            cuts.append([(p + q) / 2 for p, q in zip(pts, pts[1:])])
        for mid in product(*cuts):
            if not any(all(b[a][0] < mid[a] < b[a][1] for a in range(self.space.n)) for b in self.boxes):
                return False
        return True

    def neighbours(self, i):
        for p in self.pairs:
            if i in p:
                yield p[1] if p[0] == i else p[0]

    def connected(self) -> bool:
        return len(self.tree_edges()) == self.size - 1

    def tree_edges(self) -> list[tuple[int, int]]:
        """Spanning-tree edges (parent, child) found breadth-first from chart 0."""
        seen = {0}
        out = []
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in sorted(self.neighbours(i)):
                if j not in seen:
                    seen.add(j)
                    out.append((i, j))
                    queue.append(j)
        return out

    def pair_index(self, i, j) -> tuple[int, int]:
        """Position of the overlap {i,j} in ``pairs`` and the orientation sign."""
        srt, sign = _sort_sign((i, j))
        return self.pairs.index(srt), sign


def single_chart(space: Space, half_width=1) -> CechCover:
    return CechCover(space, (tuple((-Q(half_width), Q(half_width)) for _ in range(space.n)),))


def three_box_cube(space: Space) -> CechCover:
    """Three boxes covering the unit cube with a nonempty triple overlap."""
    if space.n < 2:
        raise DegenerateCover("three-box cover needs dimension >= 2")
    rest = tuple((Q(0), Q(1)) for _ in range(space.n - 2))
    return CechCover(space, (
        ((Q(0), Q(3, 5)), (Q(0), Q(1))) + rest,
        ((Q(2, 5), Q(1)), (Q(0), Q(3, 5))) + rest,
        ((Q(2, 5), Q(1)), (Q(2, 5), Q(1))) + rest,
    ))


class Cochain:
    """Alternating Čech cochain stored on increasing index tuples."""

    __slots__ = ("order", "data", "zero")

    def __init__(self, order: int, data: dict, zero):
        self.order = order
        self.data = data
        self.zero = zero

    def __getitem__(self, idx):
        if len(set(idx)) != len(idx):
            return self.zero
        srt, sign = _sort_sign(idx)
        v = self.data.get(srt, self.zero)
        return v if sign > 0 else -v
