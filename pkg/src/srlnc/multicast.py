"""Linear multicast construction, per-sink encoding matrices, simulation.

The construction walks edges in topological order along precomputed
edge-disjoint path families and picks, for every coded edge, local
coefficients that keep every designated sink's frontier matrix at full
rank.  Sub-rate sinks participate with target rank h_t.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .linalg import Mat, rank_of_vectors, invert, row_times
from .netgraph import Network, max_flow, topo_order

Node = Hashable
Vec = Tuple[int, ...]


class FieldTooSmall(ValueError):
    """The field cannot support a multicast for this many sinks."""


class RateExceedsSourceDegree(ValueError):
    """More message symbols per use than outgoing source links."""


class CodeInvalidForSink(ValueError):
    """A sink does not receive enough independent symbol combinations."""


@dataclass(frozen=True)
class LinearCode:
    rate: int
    gek: Dict[int, Vec]          # edge id -> length-r column
    lek: Dict[Node, Mat]         # node -> |In| x |Out| coefficients


@dataclass(frozen=True)
class Gem:
    sink: Node
    matrix: Mat                  # r x min(h_t, r)
    used_edges: Tuple[int, ...]


@dataclass(frozen=True)
class SimTrace:
    input: Vec
    edge_symbols: Dict[int, int]
    sink_outputs: Dict[Node, Vec]


def _unit(r: int, j: int) -> Vec:
    return tuple(1 if i == j else 0 for i in range(r))


def build_multicast(net: Network, sinks: Sequence[Node], seed: int = 0) -> LinearCode:
    """Greedy deterministic multicast over the designated sinks.

    Requires |F| > number of designated sinks with max-flow >= rate.  The
    seed permutes the order in which candidate coefficient vectors are
    tried, selecting among the valid codes; results are reproducible for
    a fixed (net, sinks, seed).
    """
    field = net.field
    p = field.p
    r = net.rate
    if r > len(net.out_edges[net.source]):
        raise RateExceedsSourceDegree(f"rate {r} > source out-degree {len(net.out_edges[net.source])}")
    flows = {t: max_flow(net, t) for t in sinks}
    eligible = [t for t in sinks if flows[t].value >= r]
    if p <= len(eligible):
        raise FieldTooSmall(f"|F|={p} but {len(eligible)} sinks need rate {r}")

    # per sink: min(h_t, r) paths, each prefixed with a distinct imaginary link
    paths: Dict[Node, List[List[int]]] = {}
    for t in sinks:
        n_t = min(flows[t].value, r)
        paths[t] = [[-(i + 1)] + list(pth) for i, pth in enumerate(flows[t].paths[:n_t])]

    gek: Dict[int, Vec] = {-(j + 1): _unit(r, j) for j in range(r)}
    coeffs: Dict[int, Dict[int, int]] = {}  # edge -> {pred edge -> coefficient}
    on_edge: Dict[int, List[Tuple[Node, int, int]]] = {}
    for t in sinks:
        for i, pth in enumerate(paths[t]):
            for pos, e in enumerate(pth):
                if e >= 0:
                    on_edge.setdefault(e, []).append((t, i, pos))
    frontier: Dict[Node, List[int]] = {t: [pth[0] for pth in paths[t]] for t in sinks}

    rng = random.Random(seed)
    order = topo_order(net)
    topo_index = {n: i for i, n in enumerate(order)}
    for e in sorted(range(len(net.edges)), key=lambda e: (topo_index[net.tail(e)], e)):
        users = on_edge.get(e)
        if not users:
            gek[e] = (0,) * r
            coeffs[e] = {}
            continue
        preds = sorted({paths[t][i][pos - 1] for (t, i, pos) in users})
        candidates = list(itertools.product(range(p), repeat=len(preds)))
        rng.shuffle(candidates)
        chosen = None
        for cand in candidates:
            f_e = tuple(sum(c * gek[d][j] for c, d in zip(cand, preds)) % p for j in range(r))
            ok = True
            for (t, i, pos) in users:
                repl = list(frontier[t])
                repl[i] = e
                vecs = [f_e if d == e else gek[d] for d in repl]
                if rank_of_vectors(field, vecs) != len(repl):
                    ok = False
                    break
            if ok:
                chosen = (cand, f_e)
                break
        if chosen is None:
            raise FieldTooSmall(f"no valid coefficients for edge {e} over GF({p})")
        cand, f_e = chosen
        gek[e] = f_e
        coeffs[e] = dict(zip(preds, cand))
        for (t, i, pos) in users:
            frontier[t][i] = e

    lek: Dict[Node, Mat] = {}
    for x in net.nodes:
        ins = sorted(net.in_edges[x])
        outs = sorted(net.out_edges[x])
        k = [[coeffs.get(e, {}).get(d, 0) for e in outs] for d in ins]
        lek[x] = Mat(field, k, cols=len(outs))

    code = LinearCode(rate=r, gek=gek, lek=lek)
    _assert_consistent(net, code)
    return code


def _assert_consistent(net: Network, code: LinearCode) -> None:
    p = net.field.p
    r = code.rate
    for x in net.nodes:
        ins = sorted(net.in_edges[x])
        outs = sorted(net.out_edges[x])
        k = code.lek[x]
        for jc, e in enumerate(outs):
            want = tuple(
                sum(k.data[ji][jc] * code.gek[d][row] for ji, d in enumerate(ins)) % p
                for row in range(r)
            )
            assert code.gek[e] == want, f"encoding kernels inconsistent at edge {e}"


def extract_gem(code: LinearCode, net: Network, t: Node) -> Gem:
    """Decoding matrix of sink t: min(h_t, r) independent incoming columns.

    Scans incoming edges by ascending id and keeps each one that raises
    the rank, so the choice is deterministic.
    """
    r = code.rate
    h = max_flow(net, t).value
    target = min(h, r)
    chosen: List[int] = []
    vecs: List[Vec] = []
    for e in sorted(net.in_edges[t]):
        if len(chosen) == target:
            break
        v = code.gek[e]
        if rank_of_vectors(net.field, vecs + [v]) > len(vecs):
            chosen.append(e)
            vecs.append(v)
    if len(chosen) < target:
        raise CodeInvalidForSink(f"sink {t}: {len(chosen)} independent inputs, need {target}")
    return Gem(sink=t, matrix=Mat.from_cols(net.field, vecs, nrows=r), used_edges=tuple(chosen))


def simulate(net: Network, code: LinearCode, P: Optional[Mat], v: Sequence[int]) -> SimTrace:
    """Propagate one message vector through the network.

    The network input is v @ P (or v itself when P is None).  Every edge
    symbol is checked against the global kernel on the fly.
    """
    field = net.field
    p = field.p
    r = code.rate
    if len(v) != r:
        raise ValueError("message length != rate")
    v = tuple(x % p for x in v)
    x = row_times(v, P) if P is not None else v
    sym: Dict[int, int] = {-(j + 1): x[j] for j in range(r)}
    for node in topo_order(net):
        ins = sorted(net.in_edges[node])
        outs = sorted(net.out_edges[node])
        k = code.lek[node]
        for jc, e in enumerate(outs):
            s = sum(k.data[ji][jc] * sym[d] for ji, d in enumerate(ins)) % p
            assert s == sum(a * b for a, b in zip(x, code.gek[e])) % p, \
                f"edge {e} symbol disagrees with its global kernel"
            sym[e] = s
    outputs = {t: tuple(sym[d] for d in sorted(net.in_edges[t])) for t in net.sinks}
    return SimTrace(input=v, edge_symbols=sym, sink_outputs=outputs)


def decode_full_rate(gem: Gem, P: Optional[Mat], received: Sequence[int]) -> Vec:
    """Invert P @ B_t on the received row; exact for full-rate sinks."""
    B = gem.matrix
    if B.rows != B.cols:
        raise ValueError("gem is not square")
    PB = (P @ B) if P is not None else B
    return row_times(received, invert(PB))
