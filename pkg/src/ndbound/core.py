"""Domain types shared by the analysis modules.

A node's view of its neighborhood is a :class:`ProbabilityVector`: entry ``j``
is the probability (or rate) with which the node receives neighbor ``j``'s
announcement. Indices are 0-based everywhere, including the JSON format.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping

import numpy as np

from .errors import BadPair, EmptyVector, NonFinite, OutOfRange, ValidationError

MAX_EXACT_N = 24


class TimeModel(enum.Enum):
    CONTINUOUS_EXPONENTIAL = "exponential"
    SLOTTED_GEOMETRIC = "slotted"

    @classmethod
    def parse(cls, name: str | TimeModel) -> TimeModel:
        if isinstance(name, cls):
            return name
        try:
            return cls(name)
        except ValueError:
            raise ValidationError(f"unknown time model {name!r}") from None


@dataclass(frozen=True)
class ProbabilityVector:
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(self.values)
        if not vals:
            raise EmptyVector()
        clean = []
        for i, v in enumerate(vals):
            try:
                f = float(v)
            except (TypeError, ValueError):
                raise ValidationError(f"index {i}: {v!r} is not a number") from None
            if isinstance(v, bool):
                raise ValidationError(f"index {i}: boolean is not a probability")
            if not math.isfinite(f):
                raise NonFinite(i, f)
            if not 0.0 < f <= 1.0:
                raise OutOfRange(i, f)
            clean.append(f)
        object.__setattr__(self, "values", tuple(clean))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)

    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values)

    def to_json(self) -> dict:
        return {"probabilities": list(self.values)}

    @classmethod
    def from_json(cls, obj: Mapping) -> ProbabilityVector:
        if not isinstance(obj, Mapping) or "probabilities" not in obj:
            raise ValidationError('expected an object with a "probabilities" list')
        probs = obj["probabilities"]
        if not isinstance(probs, list):
            raise ValidationError('"probabilities" must be a list')
        return cls(tuple(probs))


def validate(values: Iterable[float]) -> ProbabilityVector:
    """Check ``values`` and wrap them as a :class:`ProbabilityVector`.

    Raises the error for the first offending index: :class:`EmptyVector`,
    :class:`NonFinite` for NaN/inf, :class:`OutOfRange` for values outside
    ``(0, 1]``.
    """
    if isinstance(values, ProbabilityVector):
        return values
    return ProbabilityVector(tuple(values))


@dataclass(frozen=True)
class NeighborPair:
    j: int
    k: int

    def check(self, n: int) -> NeighborPair:
        j, k = self.j, self.k
        if j == k or not (0 <= j < n) or not (0 <= k < n):
            raise BadPair(j, k, n)
        return self

    def others(self, n: int) -> list[int]:
        """Indices of the neighbors other than ``j`` and ``k``, ascending."""
        return [r for r in range(n) if r != self.j and r != self.k]


def as_pair(pair) -> NeighborPair:
    if isinstance(pair, NeighborPair):
        return pair
    j, k = pair
    return NeighborPair(int(j), int(k))


@dataclass(frozen=True)
class NetworkTopology:
    nodes: Mapping[str, ProbabilityVector]

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ValidationError("topology has no nodes")
        frozen = {}
        for node_id, vec in self.nodes.items():
            if not isinstance(node_id, str):
                raise ValidationError(f"node id {node_id!r} is not a string")
            frozen[node_id] = validate(vec)
        # sorted so iteration order never depends on input ordering
        object.__setattr__(self, "nodes", dict(sorted(frozen.items())))

    def __iter__(self) -> Iterator[tuple[str, ProbabilityVector]]:
        return iter(self.nodes.items())

    def to_json(self) -> dict:
        return {"nodes": {k: v.to_json() for k, v in self.nodes.items()}}

    @classmethod
    def from_json(cls, obj) -> NetworkTopology:
        if not isinstance(obj, Mapping) or not isinstance(obj.get("nodes"), Mapping):
            raise ValidationError('topology must be an object with a "nodes" object')
        nodes = {}
        for node_id, entry in obj["nodes"].items():
            try:
                nodes[node_id] = ProbabilityVector.from_json(entry)
            except ValidationError as exc:
                raise ValidationError(f"node {node_id!r}: {exc}") from exc
        return cls(nodes)


def load_topology(fp: IO[str]) -> NetworkTopology:
    try:
        obj = json.load(fp)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return NetworkTopology.from_json(obj)


def dump_topology(topology: NetworkTopology, fp: IO[str]) -> None:
    json.dump(topology.to_json(), fp, indent=2)
    fp.write("\n")
