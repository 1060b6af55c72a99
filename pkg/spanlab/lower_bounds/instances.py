"""
the hierarchy of hard instances.

dot-B[p] is l+1 layers of p vertices. Vertex j of layer i points at
j + a (mod p) of layer i+1 for every label a. The demand pairs are the
constant-label paths.

double-dot-B[p0, p1] is the product of two of those. Layer q advances factor
q % 2, and a demand path alternates between its two labels.

H_k replaces every interior vertex of double-dot-B with a copy of H_{k-1}.
A double-dot-B edge with label c in factor f runs between the f-side ports
pi_f(c) of the two copies it joins (inputs for f = 0, outputs for f = 1). A
pair of level k survives iff (pi_0(a), pi_1(b)) is a pair of level k-1. One
pi is shared by every copy at a level.
"""

import math
import random
import warnings
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field, replace

from loguru import logger

from spanlab.common.classes import (
    Address,
    DemandPair,
    Edge,
    EdgeKey,
    Flavor,
    Graph,
    HierarchyInstance,
    InstanceMetadata,
    LayeredInstance,
    LevelSpec,
    Pair,
    edge_key,
)
from spanlab.common.constants import MAX_GENERATION_ATTEMPTS
from spanlab.common.errors import GenerationDegenerate, InputError
from spanlab.lower_bounds.avgfree import AvgFreeSet, behrend_set


def _label_tuple(labels: AvgFreeSet | Iterable[int], p: int, ell: int) -> tuple[int, ...]:
    members = labels.members if isinstance(labels, AvgFreeSet) else tuple(labels)
    if not members:
        raise InputError("label set is empty")
    if min(members) < 1 or max(members) > p // ell:
        raise InputError(f"labels {members} are not inside [1, {p // ell}]")
    return tuple(members)


def layered_product(
    sizes: tuple[int, ...],
    label_sets: tuple[tuple[int, ...], ...],
    ell: int,
    directed: bool,
) -> LayeredInstance:
    """k-factor product, layer q advances factor q % k, ell steps per factor"""
    k = len(sizes)
    strides = [math.prod(sizes[f + 1 :]) for f in range(k)]
    layer_size = math.prod(sizes)
    layers = k * ell + 1

    def coords(idx: int) -> list[int]:
        return [(idx // strides[f]) % sizes[f] for f in range(k)]

    def index(xs: list[int]) -> int:
        return sum(x * s for x, s in zip(xs, strides))

    edges: list[Edge] = []
    for q in range(layers - 1):
        f = q % k
        for idx in range(layer_size):
            xs = coords(idx)
            for a in label_sets[f]:
                ys = list(xs)
                ys[f] = (xs[f] + a) % sizes[f]
                edges.append(Edge(q * layer_size + idx, (q + 1) * layer_size + index(ys), 1, a))

    pairs: list[DemandPair] = []
    label_tuples: list[tuple[int, ...]] = [()]
    for labels in label_sets:
        label_tuples = [t + (a,) for t in label_tuples for a in labels]
    for idx in range(layer_size):
        start = coords(idx)
        for sig in label_tuples:
            xs = list(start)
            path = [idx]
            for q in range(layers - 1):
                f = q % k
                xs[f] = (xs[f] + sig[f]) % sizes[f]
                path.append((q + 1) * layer_size + index(xs))
            pairs.append(DemandPair(path[0], path[-1], sig, tuple(path)))

    layer_of = tuple(v // layer_size for v in range(layers * layer_size))
    graph = Graph(layers * layer_size, tuple(edges), directed, layer_of)
    return LayeredInstance(graph, layer_size, layers, ell, sizes, label_sets, tuple(pairs))


def build_dotB(
    p: int,
    ell: int,
    labels: AvgFreeSet | Iterable[int] | None = None,
    directed: bool = False,
) -> LayeredInstance:
    if p < 1 or ell < 1:
        raise InputError(f"need p >= 1 and ell >= 1, got p={p}, ell={ell}")
    label_set = _label_tuple(behrend_set(p, ell) if labels is None else labels, p, ell)
    return layered_product((p,), (label_set,), ell, directed)


def build_ddotB(
    p1: int,
    p2: int,
    ell: int,
    labels1: AvgFreeSet | Iterable[int] | None = None,
    labels2: AvgFreeSet | Iterable[int] | None = None,
    directed: bool = False,
) -> LayeredInstance:
    """B[p] for p1 == p2 (so p = p1 * p2), the imbalanced product otherwise"""
    if p1 < 2 or p2 < 2:
        raise InputError(f"factor sizes must be >= 2, got ({p1}, {p2})")
    l1 = _label_tuple(behrend_set(p1, ell) if labels1 is None else labels1, p1, ell)
    l2 = _label_tuple(behrend_set(p2, ell) if labels2 is None else labels2, p2, ell)
    return layered_product((p1, p2), (l1, l2), ell, directed)


# ---- recursive hierarchy ----


@dataclass(frozen=True)
class InnerPair:
    path: tuple[int, ...]
    """input port -> output port, block-local ids"""
    critical: tuple[EdgeKey, ...]
    signature: tuple[int, ...]


@dataclass
class Block:
    """one level of the hierarchy, used as a template for its copies"""

    vertex_count: int = 0
    edges: list[Edge] = field(default_factory=list)
    addresses: list[Address] = field(default_factory=list)
    inputs: list[int] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)
    pairs: dict[tuple[int, int], InnerPair] = field(default_factory=dict)
    """(input index, output index) -> pair"""

    def add_vertex(self, address: Address) -> int:
        self.addresses.append(address)
        self.vertex_count += 1
        return self.vertex_count - 1


type BaseBuilder = Callable[[int, int, random.Random], tuple[Block, LevelSpec]]
"""(input ports, output ports, rng) -> level-1 block"""


def biclique_block(pin: int, pout: int, rng: random.Random | None = None) -> tuple[Block, LevelSpec]:
    """K_{pin,pout}, every (input, output) is a pair and its edge is critical"""
    block = Block()
    block.inputs = [block.add_vertex(((0, i),)) for i in range(pin)]
    block.outputs = [block.add_vertex(((1, j),)) for j in range(pout)]
    for i, u in enumerate(block.inputs):
        for j, v in enumerate(block.outputs):
            block.edges.append(Edge(u, v))
            block.pairs[(i, j)] = InnerPair((u, v), (edge_key(u, v),), ())
    spec = LevelSpec(1, (pin, pout), (), (), len(block.pairs), float(len(block.pairs)))
    return block, spec


def dotb_block(ell: int) -> BaseBuilder:
    def build(pin: int, pout: int, rng: random.Random) -> tuple[Block, LevelSpec]:
        if pin != pout:
            raise InputError(f"dot-B base needs as many inputs as outputs, got {pin}/{pout}")
        if pin < ell:
            raise InputError(
                f"dot-B base needs p' >= ell, got p'={pin}, ell={ell} (raise p)"
            )
        labels = behrend_set(pin, ell)
        base = build_dotB(pin, ell, labels)
        block = Block()
        for v in range(base.graph.vertex_count):
            block.add_vertex(((v // pin, v % pin),))
        block.edges = list(base.graph.edges)
        block.inputs = list(range(pin))
        block.outputs = [ell * pin + j for j in range(pin)]
        for pair in base.pairs:
            key = (pair.source, pair.target - ell * pin)
            block.pairs[key] = InnerPair(pair.path, (), pair.signature)
        spec = LevelSpec(
            1, (pin,), (labels.members,), (), len(block.pairs), float(len(block.pairs)), labels.xi
        )
        return block, spec

    return build


@dataclass(frozen=True)
class _LevelPlan:
    level: int
    s0: int
    s1: int
    full0: AvgFreeSet
    full1: AvgFreeSet
    labels0: tuple[int, ...] = ()
    labels1: tuple[int, ...] = ()


def _plan_levels(p: int, ell: int, k: int, imbalanced_gamma: int | None) -> list[_LevelPlan]:
    """top-down sizing: s_j from the port target, p_{j-1} = |L_j|"""
    plans: list[_LevelPlan] = []
    ports = p
    for j in range(k, 1, -1):
        if imbalanced_gamma is not None and j == 2:
            g = imbalanced_gamma
            s0 = round(ports ** ((g + 2) / (2 * g + 2)))
            s1 = round(ports ** (g / (2 * g + 2)))
        else:
            s0 = s1 = math.isqrt(ports)
        if min(s0, s1) < ell:
            raise InputError(
                f"p={p} is too small for k={k}, ell={ell}: level {j} factor sizes ({s0}, {s1}) < ell"
            )
        full0 = behrend_set(s0, ell)
        full1 = full0 if s1 == s0 else behrend_set(s1, ell)
        plans.append(_LevelPlan(j, s0, s1, full0, full1))
        ports = len(full0.members)

    # truncate each label set to the port count of the level below it
    sized: list[_LevelPlan] = []
    for i, plan in enumerate(plans):
        if i + 1 < len(plans):
            inner_ports = plans[i + 1].s0 * plans[i + 1].s1
            l0 = plan.full0.members[:inner_ports]
            l1 = plan.full1.members[:inner_ports]
        else:
            l0, l1 = plan.full0.members, plan.full1.members
        sized.append(
            _LevelPlan(plan.level, plan.s0, plan.s1, plan.full0, plan.full1, l0, l1)
        )
    return sized


def expected_pair_count(
    layer_size: int,
    inner_pairs: Iterable[tuple[int, int]],
    labels0: int,
    labels1: int,
    pin: int,
    pout: int,
    shared: bool,
) -> float:
    """
    E|P_j| over the random port maps. with one shared pi, a == b lands on the
    diagonal (i, i) and a != b on a uniform off-diagonal (i, o).
    """
    keys = list(inner_pairs)
    if not shared:
        return layer_size * labels0 * labels1 * len(keys) / (pin * pout)
    diag = sum(1 for i, o in keys if i == o)
    off = len(keys) - diag
    expected = labels0 * diag / pin
    if pin > 1:
        expected += labels0 * (labels0 - 1) * off / (pin * (pin - 1))
    return layer_size * expected


def _level_block(
    inner: Block,
    plan: _LevelPlan,
    ell: int,
    perms: tuple[tuple[int, ...], tuple[int, ...]],
    connector_length: int,
    connector_weight: int,
) -> Block:
    """
    assemble level j from copies of `inner`. connectors are either paths of
    `connector_length` unit edges or one edge of `connector_weight`.
    """
    s0, s1 = plan.s0, plan.s1
    labels = (plan.labels0, plan.labels1)
    size = s0 * s1
    top = 2 * ell
    block = Block()

    block.inputs = [block.add_vertex(((0, idx),)) for idx in range(size)]
    block.outputs = [block.add_vertex(((top, idx),)) for idx in range(size)]

    offset: dict[tuple[int, int], int] = {}
    for layer in range(1, top):
        for idx in range(size):
            base = block.vertex_count
            offset[(layer, idx)] = base
            prefix = ((layer, idx),)
            for address in inner.addresses:
                block.add_vertex(prefix + address)
            block.edges.extend(
                Edge(e.u + base, e.v + base, e.weight, e.label) for e in inner.edges
            )

    ports = (inner.inputs, inner.outputs)

    def step(idx: int, factor: int, label: int) -> int:
        x, y = divmod(idx, s1)
        if factor == 0:
            x = (x + label) % s0
        else:
            y = (y + label) % s1
        return x * s1 + y

    def endpoint(layer: int, idx: int, factor: int, pos: int) -> int:
        if layer == 0:
            return block.inputs[idx]
        if layer == top:
            return block.outputs[idx]
        return offset[(layer, idx)] + ports[factor][perms[factor][pos]]

    connectors: dict[tuple[int, int, int], tuple[int, ...]] = {}
    cid = 0
    for layer in range(top):
        f = layer % 2
        for idx in range(size):
            for pos, label in enumerate(labels[f]):
                a = endpoint(layer, idx, f, pos)
                b = endpoint(layer + 1, step(idx, f, label), f, pos)
                if connector_length == 1:
                    block.edges.append(Edge(a, b, connector_weight, label))
                    chain = (a, b)
                else:
                    mids = [
                        block.add_vertex(((-1, cid, t),))
                        for t in range(1, connector_length)
                    ]
                    chain = (a, *mids, b)
                    block.edges.extend(Edge(x, y, 1, label) for x, y in zip(chain, chain[1:]))
                connectors[(layer, idx, pos)] = chain
                cid += 1

    for start in range(size):
        for pa, a in enumerate(plan.labels0):
            for pb, b in enumerate(plan.labels1):
                key = (perms[0][pa], perms[1][pb])
                inner_pair = inner.pairs.get(key)
                if inner_pair is None:
                    continue
                path = [block.inputs[start]]
                critical: list[EdgeKey] = []
                idx = start
                for layer in range(top):
                    f = layer % 2
                    pos = pa if f == 0 else pb
                    path.extend(connectors[(layer, idx, pos)][1:])
                    idx = step(idx, f, a if f == 0 else b)
                    if layer + 1 == top:
                        break
                    base = offset[(layer + 1, idx)]
                    inner_path = inner_pair.path if (layer + 1) % 2 == 1 else inner_pair.path[::-1]
                    path.extend(v + base for v in inner_path[1:])
                    critical.extend(
                        edge_key(u + base, v + base) for u, v in inner_pair.critical
                    )
                block.pairs[(start, idx)] = InnerPair(tuple(path), tuple(critical), (a, b))
    return block


def hierarchy_distance(k: int, ell: int, flavor: Flavor, gamma: int = 1) -> int:
    """d_k of the given flavor"""
    if flavor == Flavor.HOPSET:
        return ell if k == 1 else (2 * k - 1) * ell * (2 * ell - 1) ** (k - 1)
    d = (2 * (k - 1) * ell + 1) * (2 * ell - 1) ** (k - 1)
    return gamma * d if flavor == Flavor.GIRTH else d


def hierarchy_penalty(k: int, ell: int, flavor: Flavor) -> int:
    """removal penalty (spanner, girth) or hop-limited penalty (hopset)"""
    if flavor == Flavor.HOPSET:
        return 2 * (ell + 1) ** (k - 1)
    return 2 * (2 * ell - 1) ** (k - 1)


def _assemble(
    p: int,
    ell: int,
    k: int,
    flavor: Flavor,
    seed: int,
    gamma: int,
    base_builder: BaseBuilder,
    imbalanced_gamma: int | None,
) -> tuple[HierarchyInstance, bool]:
    """one attempt, returns the instance and whether it clears the quality floor"""
    rng = random.Random(seed)
    plans = _plan_levels(p, ell, k, imbalanced_gamma)

    if plans:
        bottom = plans[-1]
        pin, pout = len(bottom.labels0), len(bottom.labels1)
    else:
        pin = pout = p
    block, base_spec = base_builder(pin, pout, rng)
    specs = [base_spec]
    healthy = len(block.pairs) > 0
    logger.info(f"level 1 built: {block.vertex_count} vertices, {len(block.pairs)} pairs")

    for plan in reversed(plans):
        pin, pout = len(block.inputs), len(block.outputs)
        shared = plan.s0 == plan.s1 and pin == pout and plan.labels0 == plan.labels1
        if shared:
            pi = tuple(rng.sample(range(pin), len(plan.labels0)))
            perms = (pi, pi)
        else:
            perms = (
                tuple(rng.sample(range(pin), len(plan.labels0))),
                tuple(rng.sample(range(pout), len(plan.labels1))),
            )
        expected = expected_pair_count(
            plan.s0 * plan.s1,
            block.pairs.keys(),
            len(plan.labels0),
            len(plan.labels1),
            pin,
            pout,
            shared,
        )
        scale = (2 * ell - 1) ** (plan.level - 1)
        if flavor == Flavor.HOPSET:
            block = _level_block(block, plan, ell, perms, 1, scale)
        else:
            block = _level_block(block, plan, ell, perms, gamma * scale, 1)
        count = len(block.pairs)
        if count == 0 or count < expected / 2:
            healthy = False
        specs.append(
            LevelSpec(
                plan.level,
                (plan.s0, plan.s1),
                (plan.labels0, plan.labels1),
                perms,
                count,
                expected,
                plan.s0 / len(plan.full0.members),
            )
        )
        logger.info(
            f"level {plan.level} built: {block.vertex_count} vertices, "
            f"{count} pairs (expected {expected:.1f})"
        )

    graph = Graph(block.vertex_count, tuple(block.edges))
    pairs = tuple(
        DemandPair(ip.path[0], ip.path[-1], ip.signature, ip.path)
        for _, ip in sorted(block.pairs.items())
    )
    critical = {
        (ip.path[0], ip.path[-1]): ip.critical for _, ip in sorted(block.pairs.items())
    }
    metadata = InstanceMetadata(
        vertex_count=graph.vertex_count,
        edge_count=graph.edge_count,
        pair_count=len(pairs),
        distance=hierarchy_distance(k, ell, flavor, gamma),
        penalty=hierarchy_penalty(k, ell, flavor),
        p=p,
        level_pair_counts=tuple(s.pair_count for s in specs),
        level_expected=tuple(s.expected_pairs for s in specs),
    )
    instance = HierarchyInstance(
        k=k,
        ell=ell,
        flavor=flavor,
        graph=graph,
        pairs=pairs,
        critical_map=critical,
        seed=seed,
        metadata=metadata,
        levels=tuple(specs),
        addresses=tuple(block.addresses),
        gamma=gamma,
    )
    return instance, healthy


def build_hierarchy(
    p: int,
    ell: int,
    k: int,
    flavor: Flavor,
    seed: int,
    base_builder: BaseBuilder,
    gamma: int = 1,
    imbalanced_gamma: int | None = None,
    strict: bool = True,
) -> HierarchyInstance:
    """
    retry seed, seed+1, ... until every level keeps at least half its
    expected pairs. the best attempt (most top-level pairs) is raised with
    GenerationDegenerate, or returned with a warning when strict=False.
    """
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    if ell < 2:
        raise InputError(f"ell must be >= 2, got {ell}")

    best: HierarchyInstance | None = None
    for attempt in range(MAX_GENERATION_ATTEMPTS):
        instance, healthy = _assemble(
            p, ell, k, flavor, seed + attempt, gamma, base_builder, imbalanced_gamma
        )
        instance = _with_attempts(instance, attempt + 1)
        if healthy:
            return instance
        logger.warning(f"seed {seed + attempt} gave a degenerate instance, retrying")
        if best is None or len(instance.pairs) > len(best.pairs):
            best = instance

    message = (
        f"no healthy {flavor} instance (k={k}, ell={ell}, p={p}) "
        f"after {MAX_GENERATION_ATTEMPTS} seeds"
    )
    if strict:
        raise GenerationDegenerate(message, best)
    warnings.warn(message)
    assert best is not None
    return best


def _with_attempts(instance: HierarchyInstance, attempts: int) -> HierarchyInstance:
    return replace(instance, metadata=replace(instance.metadata, attempts=attempts))


def build_Hk(
    p: int, ell: int, k: int, flavor: Flavor | str, seed: int, strict: bool = True
) -> HierarchyInstance:
    """
    spanner flavor: K_{p',p'} at the bottom, connector paths of (2l-1)^{j-1} unit edges.
    hopset flavor: dot-B[p'] at the bottom, connector edges of weight (2l-1)^{j-1}.
    """
    flavor = Flavor(flavor)
    if flavor == Flavor.SPANNER:
        return build_hierarchy(p, ell, k, flavor, seed, biclique_block, strict=strict)
    if flavor == Flavor.HOPSET:
        return build_hierarchy(p, ell, k, flavor, seed, dotb_block(ell), strict=strict)
    raise InputError("girth instances come from build_Hk_gamma")


def critical_edges(inst: HierarchyInstance, pair: Pair) -> list[EdgeKey]:
    if inst.flavor == Flavor.HOPSET:
        raise InputError("hopset instances have no critical edges")
    inst.pair(pair)
    return list(inst.critical_map[pair])


def family_member(inst: HierarchyInstance, keep: Iterable[Pair]) -> Graph:
    """G(P'): critical edges of every pair outside `keep` removed"""
    if inst.flavor == Flavor.HOPSET:
        raise InputError("family members are defined for spanner and girth instances")
    kept = set(keep)
    for key in kept:
        inst.pair(key)
    removed = {
        e for key, edges in inst.critical_map.items() if key not in kept for e in edges
    }
    if not removed:
        return inst.graph
    return inst.graph.without(removed)
