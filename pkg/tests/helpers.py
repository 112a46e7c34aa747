"""Shared fixtures and independent brute-force oracles.

The oracles deliberately use the dumbest correct method available
(path packing by exhaustion, literal subset search, a third-party
linear algebra stack) so they cannot share bugs with the library.
"""

from __future__ import annotations

import itertools
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import GF as _sympy_GF
from sympy.polys.matrices import DomainMatrix

from srlnc import (
    FieldSpec,
    GemSet,
    Mat,
    Network,
    Subspace,
    rank_of_vectors,
)

GF2 = FieldSpec(2)
GF3 = FieldSpec(3)
GF5 = FieldSpec(5)

Vec = Tuple[int, ...]


# ---------------------------------------------------------------- networks

def butterfly(field: FieldSpec = GF3, weak_sink: bool = False) -> Network:
    """The rate-2 butterfly; optionally with node 8 hanging off the hub.

    Node 8 has max-flow 1, below the rate, which is the whole point of it.
    """
    nodes = [1, 2, 3, 4, 5, 6, 7]
    edges = [(1, 2), (1, 3), (2, 4), (2, 6), (3, 4), (3, 7), (4, 5), (5, 6), (5, 7)]
    sinks = [6, 7]
    if weak_sink:
        nodes.append(8)
        edges.append((5, 8))
        sinks.append(8)
    return Network(nodes=nodes, edges=edges, source=1, sinks=sinks, rate=2, field=field)


def classic_butterfly_code(net: Network):
    """The XOR relay code over GF(2): node 4 adds its two inputs.

    Written out by hand, kernel by kernel, so construction code is not
    in the loop.  Works for both butterfly variants.
    """
    from srlnc import LinearCode

    f = net.field
    weak = len(net.edges) == 10
    gek: Dict[int, Vec] = {
        -2: (0, 1), -1: (1, 0),
        0: (1, 0), 1: (0, 1), 2: (1, 0), 3: (1, 0),
        4: (0, 1), 5: (0, 1), 6: (1, 1), 7: (1, 1), 8: (1, 1),
    }
    lek = {
        1: Mat(f, [[0, 1], [1, 0]]),        # ins -2,-1 / outs 0,1
        2: Mat(f, [[1, 1]]),                # in 0 / outs 2,3
        3: Mat(f, [[1, 1]]),                # in 1 / outs 4,5
        4: Mat(f, [[1], [1]]),              # ins 2,4 / out 6: the XOR
        5: Mat(f, [[1, 1, 1]] if weak else [[1, 1]]),
        6: Mat(f, [[], []], cols=0),
        7: Mat(f, [[], []], cols=0),
    }
    if weak:
        gek[9] = (1, 1)
        lek[8] = Mat(f, [[]], cols=0)
    return LinearCode(rate=2, gek=gek, lek=lek)


def diamond(field: FieldSpec = GF3) -> Network:
    """Source, two parallel middles, one sink; rate 2, max-flow 2."""
    return Network(nodes=[0, 1, 2, 3], edges=[(0, 1), (0, 2), (1, 3), (2, 3)],
                   source=0, sinks=[3], rate=2, field=field)


# ---------------------------------------------------------------- gem sets

def mat_cols(field: FieldSpec, *cols: Sequence[int]) -> Mat:
    return Mat.from_cols(field, list(cols))


def gems_three_planes() -> GemSet:
    """Three planes in GF(3)^3 whose pairwise intersections are three
    distinct lines that together span the space; fully decodable."""
    b1 = mat_cols(GF3, (1, 1, 0), (0, 0, 1))
    b2 = mat_cols(GF3, (1, 0, 0), (0, 1, 1))
    b3 = mat_cols(GF3, (1, 1, 0), (1, 0, 1))
    return GemSet([b1, b2, b3], rate=3)


def gems_shared_axis() -> GemSet:
    """Three planes in GF(3)^3 all containing e3; not fully decodable."""
    b1 = mat_cols(GF3, (1, 0, 0), (0, 0, 1))
    b2 = mat_cols(GF3, (0, 1, 0), (0, 0, 1))
    b3 = mat_cols(GF3, (1, 1, 0), (0, 0, 1))
    return GemSet([b1, b2, b3], rate=3)


def gems_four_planes() -> GemSet:
    """Four planes in GF(3)^3, pairwise intersections of dimension 1,
    triple-wise 0; the smallest impossible plane family."""
    b1 = mat_cols(GF3, (1, 0, 0), (0, 1, 0))
    b2 = mat_cols(GF3, (0, 1, 0), (0, 0, 1))
    b3 = mat_cols(GF3, (1, 0, 0), (0, 0, 1))
    b4 = mat_cols(GF3, (1, 1, 0), (0, 1, 1))
    return GemSet([b1, b2, b3, b4], rate=3)


def gems_hyperplanes(field: FieldSpec, r: int, l: int) -> GemSet:
    """l coordinate hyperplanes of F^r: member i omits e_i."""
    mats = []
    for i in range(l):
        cols = [tuple(1 if a == j else 0 for a in range(r)) for j in range(r) if j != i]
        mats.append(Mat.from_cols(field, cols))
    return GemSet(mats, rate=r)


def random_gemset(rng, field: FieldSpec, r: int, k_max: int) -> GemSet:
    mats = []
    for _ in range(rng.randint(1, k_max)):
        h = rng.randint(1, r - 1)
        cols: List[Vec] = []
        while len(cols) < h:
            v = tuple(rng.randrange(field.p) for _ in range(r))
            if rank_of_vectors(field, cols + [v]) > len(cols):
                cols.append(v)
        mats.append(Mat.from_cols(field, cols))
    return GemSet(mats, rate=r)


# ---------------------------------------------------------------- table of profiles

def profile_rows() -> List[dict]:
    """Concrete instances of the catalogued intersection profiles.

    Each row pins: the expected dimension of every member-subset
    intersection, the comss_c values, the dimension totals, and the
    feasibility outcome.  `i_bar` None means infeasible.
    """
    e = lambda r, j: tuple(1 if a == j else 0 for a in range(r))
    rows: List[dict] = []

    rows.append(dict(
        name="one vector",
        gems=GemSet([mat_cols(GF3, (1, 0))], rate=2),
        inter={(0,): 1},
        comss=(1,), sum_h=1, dim_sum=1, i_bar=(1,),
    ))
    rows.append(dict(
        name="two independent vectors",
        gems=GemSet([mat_cols(GF3, e(2, 0)), mat_cols(GF3, e(2, 1))], rate=2),
        inter={(0,): 1, (1,): 1, (0, 1): 0},
        comss=(2, 0), sum_h=2, dim_sum=2, i_bar=(2, 0),
    ))
    rows.append(dict(
        name="three dependent vectors",
        gems=GemSet([mat_cols(GF3, e(2, 0)), mat_cols(GF3, e(2, 1)),
                     mat_cols(GF3, (1, 1))], rate=2),
        inter={(0, 1): 0, (0, 2): 0, (1, 2): 0},
        comss=(3, 0, 0), sum_h=3, dim_sum=2, i_bar=None,
    ))
    rows.append(dict(
        name="two planes sharing a line",
        gems=GemSet([mat_cols(GF3, e(3, 0), e(3, 1)), mat_cols(GF3, e(3, 1), e(3, 2))], rate=3),
        inter={(0, 1): 1},
        comss=(2, 1), sum_h=4, dim_sum=3, i_bar=(2, 1),
    ))
    rows.append(dict(
        name="two planes and a line, r=4",
        gems=GemSet([mat_cols(GF3, e(4, 0), e(4, 1)), mat_cols(GF3, e(4, 1), e(4, 2)),
                     mat_cols(GF3, e(4, 3))], rate=4),
        inter={(0, 1): 1, (0, 2): 0, (1, 2): 0},
        comss=(3, 1, 0), sum_h=5, dim_sum=4, i_bar=(3, 1, 0),
    ))
    rows.append(dict(
        name="two planes and a line, r=3",
        gems=GemSet([mat_cols(GF3, e(3, 0), e(3, 1)), mat_cols(GF3, e(3, 1), e(3, 2)),
                     mat_cols(GF3, (1, 1, 1))], rate=3),
        inter={(0, 1): 1, (0, 2): 0, (1, 2): 0},
        comss=(3, 1, 0), sum_h=5, dim_sum=3, i_bar=None,
    ))
    rows.append(dict(
        name="four planes, r=3",
        gems=gems_four_planes(),
        inter={(i, j): 1 for i, j in itertools.combinations(range(4), 2)}
        | {c: 0 for c in itertools.combinations(range(4), 3)},
        comss=(0, 6, 0, 0), sum_h=8, dim_sum=3, i_bar=None,
    ))
    rows.append(dict(
        name="three solids sharing a line, r=4",
        gems=GemSet([mat_cols(GF3, e(4, 0), e(4, 1), e(4, 3)),
                     mat_cols(GF3, e(4, 1), e(4, 2), e(4, 3)),
                     mat_cols(GF3, e(4, 0), e(4, 2), e(4, 3))], rate=4),
        inter={(0, 1): 2, (0, 2): 2, (1, 2): 2, (0, 1, 2): 1},
        comss=(0, 3, 1), sum_h=9, dim_sum=4, i_bar=(0, 3, 1),
    ))
    w_plus = lambda r, extra: [e(r, 2), e(r, 3), extra]
    rows.append(dict(
        name="three solids sharing a plane, r=4",
        gems=GemSet([mat_cols(GF3, *w_plus(4, e(4, 0))),
                     mat_cols(GF3, *w_plus(4, e(4, 1))),
                     mat_cols(GF3, *w_plus(4, (1, 1, 0, 0)))], rate=4),
        inter={(0, 1): 2, (0, 2): 2, (1, 2): 2, (0, 1, 2): 2},
        comss=(3, 0, 2), sum_h=9, dim_sum=4, i_bar=None,
    ))
    rows.append(dict(
        name="three solids sharing a plane, r=5",
        gems=GemSet([mat_cols(GF3, *w_plus(5, e(5, 0))),
                     mat_cols(GF3, *w_plus(5, e(5, 1))),
                     mat_cols(GF3, e(5, 2), e(5, 3), e(5, 4))], rate=5),
        inter={(0, 1): 2, (0, 2): 2, (1, 2): 2, (0, 1, 2): 2},
        comss=(3, 0, 2), sum_h=9, dim_sum=5, i_bar=(3, 0, 2),
    ))
    hyper4 = gems_hyperplanes(GF3, 4, 4)
    rows.append(dict(
        name="four solids, empty total intersection",
        gems=hyper4,
        inter={c: 4 - len(c) for s in range(2, 5) for c in itertools.combinations(range(4), s)},
        comss=(0, 0, 4, 0), sum_h=12, dim_sum=4, i_bar=(0, 0, 4, 0),
    ))
    cone = lambda plane: [e(4, 0)] + [(0,) + tuple(v) for v in plane]
    planes3 = [[(1, 0, 0), (0, 1, 0)], [(0, 1, 0), (0, 0, 1)],
               [(1, 0, 0), (0, 0, 1)], [(1, 1, 0), (0, 1, 1)]]
    rows.append(dict(
        name="four solids sharing a line",
        gems=GemSet([mat_cols(GF3, *cone(pl)) for pl in planes3], rate=4),
        inter={c: (2 if len(c) == 2 else 1) for s in range(2, 5)
               for c in itertools.combinations(range(4), s)},
        # the catalogue prints 4 at level 2; the inclusion-exclusion
        # count over this profile gives 6, and infeasibility holds either way
        comss=(0, 6, 0, 1), sum_h=12, dim_sum=4, i_bar=None,
    ))
    rows.append(dict(
        name="five hyperplanes, r=5",
        gems=gems_hyperplanes(GF2, 5, 5),
        inter={c: 5 - len(c) for s in range(2, 6) for c in itertools.combinations(range(5), s)},
        comss=(0, 0, 0, 5, 0), sum_h=20, dim_sum=5, i_bar=(0, 0, 0, 5, 0),
    ))
    return rows


# ---------------------------------------------------------------- oracles

def brute_max_flow(net: Network, t) -> int:
    """Maximum edge-disjoint path count by exhausting path subsets."""
    paths: List[Tuple[int, ...]] = []

    def walk(n, seen, acc):
        if n == t:
            paths.append(tuple(acc))
            return
        for e_ in net.out_edges[n]:
            h = net.head(e_)
            if h in seen:
                continue
            acc.append(e_)
            walk(h, seen | {h}, acc)
            acc.pop()

    walk(net.source, {net.source}, [])
    best = 0

    def pack(i, used, count):
        nonlocal best
        best = max(best, count)
        if count + (len(paths) - i) <= best:
            return
        for j in range(i, len(paths)):
            pe = set(paths[j])
            if pe & used:
                continue
            pack(j + 1, used | pe, count + 1)

    pack(0, set(), 0)
    return best


def brute_is_exact_spanner(V: Sequence[Vec], gems: GemSet) -> bool:
    """The literal definition: each member span must be exactly spanned
    by some h_i-subset of V."""
    for i in range(gems.k):
        h = gems.h(i)
        found = any(
            Subspace.from_columns(gems.field, gems.rate, list(sub)) == gems.spans[i]
            for sub in itertools.combinations(V, h)
        )
        if not found:
            return False
    return True


def brute_min_spanner_size(gems: GemSet) -> int:
    """Smallest exact spanner by exhausting subsets of the total span's
    projective lines, smallest size first.  Tiny inputs only."""
    from srlnc import subspace_lines

    cand = subspace_lines(gems.total_span())
    lo = gems.total_span().dim
    hi = sum(gems.h(i) for i in range(gems.k))
    for size in range(lo, hi + 1):
        for sub in itertools.combinations(cand, size):
            if brute_is_exact_spanner(sub, gems):
                return size
    raise AssertionError("the union of member bases always spans exactly")


def sympy_dm(A: Mat) -> DomainMatrix:
    dom = _sympy_GF(A.field.p)
    return DomainMatrix([[dom(x) for x in row] for row in A.data], (A.rows, A.cols), dom)


def sympy_rank(A: Mat) -> int:
    return sympy_dm(A).rank()


def sympy_invert(A: Mat) -> Mat:
    p = A.field.p
    inv = sympy_dm(A).inv().to_list()
    return Mat(A.field, [[int(x) % p for x in row] for row in inv])
