"""Deterministic bulk-operation primitives used throughout the engine.

Everything here is a pure batch transformation over plain Python values:
grouping (semisort), filtering (pack), a batched dictionary, and a static
spanning forest. Fixed inputs always produce bit-identical outputs.
"""

from __future__ import annotations

from .errors import BatchConflictError, DuplicateEdgeError, MissingEdgeError


def semisort(items):
    """Group key-equal items into contiguous runs.

    ``items`` is a sequence of ``(key, payload)`` pairs. The output is a
    permutation of the input in which all pairs sharing a key are adjacent.
    Runs appear in first-occurrence order of their key, so the result is
    reproducible without any randomness. No order is promised between
    distinct keys.
    """
    groups: dict = {}
    for key, payload in items:
        groups.setdefault(key, []).append(payload)
    out = []
    for key, payloads in groups.items():
        for p in payloads:
            out.append((key, p))
    return out


def pack(items, flags):
    """Return the items whose flag is true, in their original order."""
    if len(items) != len(flags):
        raise ValueError(
            f"pack: {len(items)} items but {len(flags)} flags"
        )
    return [x for x, keep in zip(items, flags) if keep]


class BatchDictionary:
    """Dictionary applying homogeneous batches of inserts, deletes, lookups.

    Within one batch at most one mutation per key is allowed. Lookups answer
    against the state before the current batch's mutations. The whole batch is
    validated up front and rejected atomically on any error.
    """

    def __init__(self):
        self._data = {}

    def __len__(self):
        return len(self._data)

    def __contains__(self, key):
        return key in self._data

    def get(self, key, default=None):
        return self._data.get(key, default)

    def items(self):
        return self._data.items()

    def keys(self):
        return self._data.keys()

    def apply(self, ops):
        """Apply one batch of ``("insert", k, v) | ("delete", k) | ("lookup", k)``.

        Returns the lookup results in order, one ``(present, value)`` pair per
        lookup op.
        """
        mutated = set()
        inserts = []
        deletes = []
        lookups = []
        for op in ops:
            tag = op[0]
            if tag == "insert":
                _, key, value = op
                if key in mutated:
                    raise BatchConflictError(f"two mutations for key {key!r} in one batch")
                mutated.add(key)
                if key in self._data:
                    raise DuplicateEdgeError(f"insert of present key {key!r}")
                inserts.append((key, value))
            elif tag == "delete":
                _, key = op
                if key in mutated:
                    raise BatchConflictError(f"two mutations for key {key!r} in one batch")
                mutated.add(key)
                if key not in self._data:
                    raise MissingEdgeError(f"delete of absent key {key!r}")
                deletes.append(key)
            elif tag == "lookup":
                lookups.append(op[1])
            else:
                raise ValueError(f"unknown dictionary op {tag!r}")
        results = []
        for key in lookups:
            if key in self._data:
                results.append((True, self._data[key]))
            else:
                results.append((False, None))
        for key in deletes:
            del self._data[key]
        for key, value in inserts:
            self._data[key] = value
        return results


def spanning_forest(edges):
    """Select a maximal acyclic subset of ``edges`` by index order.

    ``edges`` is a sequence of ``(a, b)`` pairs over opaque hashable node
    labels; multi-edges and self-loops are permitted and never selected twice
    (or at all, for self-loops). Returns ``(forest, labels)`` where ``forest``
    is the list of selected edge indices and ``labels`` maps every node seen
    in the input to its component label, with equal labels exactly for
    connected nodes.

    Deterministic: union by size with index-order scanning; the lower edge
    index wins ties.
    """
    parent = {}
    size = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    forest = []
    for idx, (a, b) in enumerate(edges):
        for node in (a, b):
            if node not in parent:
                parent[node] = node
                size[node] = 1
        if a == b:
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
        forest.append(idx)
    labels = {node: find(node) for node in parent}
    return forest, labels
