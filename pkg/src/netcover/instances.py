"""Random benchmark instances, instance sets and coverage radii."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx

from .errors import GraphError
from .graph import Network, dump_graph, load_graph

POLICIES = ("small", "large")
RESAMPLE_CAP = 1000
LENGTH_RANGE = (0.5, 1.5)
PROBABILITIES = (0.1, 0.2, 0.3, 0.4)
FAMILIES = {
    "random_A": (10, 15, 20),
    "random_B": (25, 30, 40),
}


def gen_random(n: int, p: float, seed: int) -> Network:
    """Connected G(n, p) sample with uniform edge lengths.

    Each attempt draws a fresh graph seed from a generator keyed on ``seed``,
    so the result is a pure function of ``(n, p, seed)``.
    """
    if n < 2:
        raise GraphError(f"need at least two nodes, got {n}")
    if not 0 < p <= 1:
        raise GraphError(f"edge probability {p} outside (0, 1]")
    rng = random.Random(seed)
    for _ in range(RESAMPLE_CAP):
        sub = rng.getrandbits(32)
        g = nx.gnp_random_graph(n, p, seed=sub)
        if not nx.is_connected(g):
            continue
        lengths = random.Random(sub)
        lo, hi = LENGTH_RANGE
        triples = [(a, b, round(lengths.uniform(lo, hi), 6)) for a, b in sorted(g.edges())]
        return Network.from_edges(n, triples)
    raise GraphError(f"no connected G({n}, {p}) sample in {RESAMPLE_CAP} draws (seed {seed})")


def radius_for(net: Network, policy: str) -> float:
    if net.m == 0:
        raise GraphError("network has no edges")
    if policy == "small":
        return net.mean_length()
    if policy == "large":
        return 2.0 * net.mean_length()
    raise GraphError(f"unknown radius policy {policy!r}")


@dataclass
class InstanceEntry:
    id: str
    file: str
    n: int
    p: float | None = None
    seed: int | None = None
    source: str = "random"


@dataclass
class InstanceSet:
    name: str
    radius_policy: str = "large"
    instances: list[InstanceEntry] = field(default_factory=list)
    root: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        if self.radius_policy not in POLICIES:
            raise GraphError(f"unknown radius policy {self.radius_policy!r}")

    def load(self, entry: InstanceEntry) -> Network:
        return load_graph(self.root / entry.file)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "radius_policy": self.radius_policy,
            "instances": [vars(e) for e in self.instances],
        }

    def save(self, path: str | Path) -> None:
        path = Path(path)
        path.write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def from_json(cls, data: dict, root: str | Path = ".") -> "InstanceSet":
        entries = [InstanceEntry(**e) for e in data["instances"]]
        return cls(data["name"], data.get("radius_policy", "large"), entries, Path(root))

    @classmethod
    def read(cls, path: str | Path) -> "InstanceSet":
        path = Path(path)
        return cls.from_json(json.loads(path.read_text()), path.parent)


def gen_set(family: str, out_dir: str | Path, seed: int = 0, policy: str = "large",
            sizes: tuple[int, ...] | None = None,
            probabilities: tuple[float, ...] = PROBABILITIES) -> InstanceSet:
    """Write one graph per (n, p) and the set file ``<family>.json``."""
    if sizes is None:
        try:
            sizes = FAMILIES[family]
        except KeyError:
            raise GraphError(f"unknown family {family!r}; pass sizes explicitly") from None
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (n, p) in enumerate((n, p) for n in sizes for p in probabilities):
        s = seed * 1000 + i
        name = f"{family}_n{n}_p{p:g}_s{s}"
        dump_graph(gen_random(n, p, s), out / f"{name}.txt")
        entries.append(InstanceEntry(name, f"{name}.txt", n, p, s))
    iset = InstanceSet(family, policy, entries, out)
    iset.save(out / f"{family}.json")
    return iset
