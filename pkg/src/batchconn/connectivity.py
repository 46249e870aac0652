"""Fully dynamic connectivity engine over a hierarchy of spanning forests.

The structure keeps L = max(1, ceil(log2 n)) nested forests F_1 .. F_L, one
Euler tour forest per level, a shared adjacency store, and a global edge
dictionary. Every edge carries a level in [1, L] that never increases.
Maintained invariants:

  * every connected component of the subgraph of edges with level <= i has
    at most 2^i vertices;
  * F_L is a minimum spanning forest when edges are weighted by level, so a
    non-tree edge's endpoints are always connected within the forest of its
    own level;
  * a tree edge of level l is linked in exactly F_l .. F_L.

Batches are validated up front and applied atomically. Deleting tree edges
triggers a bottom-up replacement search over the affected levels, using one
of two strategies: ``simple`` restarts a doubling scan per round and moves
examined edges down a level eagerly; ``interleaved`` keeps one global
doubling schedule per level, defers all forest insertions and level
decreases to the end of the level, and tracks merged components in a
supercomponent map so oversized merges stop pushing. Work counters record
every level decrease for amortization checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .adjstore import AdjacencyStore
from .errors import (
    DuplicateEdgeError,
    GraphError,
    InvalidVertexError,
    MissingEdgeError,
    SelfLoopError,
)
from .etforest import EulerTourForest
from .primitives import BatchDictionary, semisort, spanning_forest

TREE = "tree"
NONTREE = "nontree"


class EdgeRecord:
    """One live undirected edge: canonical endpoints, level, status, slots."""

    __slots__ = ("u", "v", "level", "status", "pos", "levels_seen")

    def __init__(self, u, v, level, status):
        self.u = u
        self.v = v
        self.level = level
        self.status = status
        self.pos = {}
        self.levels_seen = [level]

    @property
    def key(self):
        return (self.u, self.v)

    def __repr__(self):  # pragma: no cover - debugging aid
        return f"<edge ({self.u},{self.v}) l={self.level} {self.status}>"


class WorkCounters:
    """Work-accounting instrumentation for the amortization structure.

    ``pushes`` counts every level decrease; the per-(deletion batch, level)
    matrix, per-level round counts, and replacement-search call counts allow
    the push bound P <= m * L and the per-round doubling guarantee to be
    checked from the outside.
    """

    def __init__(self, n, levels):
        self.n = n
        self.levels = levels
        self.edges_inserted = 0          # m: edges ever inserted
        self.edges_deleted = 0           # K: edges ever deleted
        self.insert_batches = 0
        self.deletion_batches = 0        # d
        self.query_batches = 0
        self.queries = 0
        self.pushes = 0                  # P: total level decreases
        self.deletion_batch_sizes = []   # k_b per deletion batch
        self.pushes_by_batch_level = {}  # (b, i) -> count
        self.rounds_by_batch_level = {}
        self.phases_by_batch_level = {}
        self.search_calls = 0            # replacement-search invocations
        self.search_calls_by_batch_level = {}
        self.phases_total = 0
        self.doubling_checks = 0
        self.doubling_violations = 0
        self.level_regressions = 0

    def record_push(self, from_level, batch):
        self.pushes += 1
        if batch is not None:
            key = (batch, from_level)
            self.pushes_by_batch_level[key] = self.pushes_by_batch_level.get(key, 0) + 1

    def record_round(self, level, batch):
        if batch is not None:
            key = (batch, level)
            self.rounds_by_batch_level[key] = self.rounds_by_batch_level.get(key, 0) + 1

    def record_phase(self, level, batch):
        self.phases_total += 1
        if batch is not None:
            key = (batch, level)
            self.phases_by_batch_level[key] = self.phases_by_batch_level.get(key, 0) + 1

    def record_search_call(self, level, batch):
        self.search_calls += 1
        if batch is not None:
            key = (batch, level)
            self.search_calls_by_batch_level[key] = (
                self.search_calls_by_batch_level.get(key, 0) + 1
            )

    def delta(self):
        if self.deletion_batches == 0:
            return 0.0
        return self.edges_deleted / self.deletion_batches

    def push_bound(self):
        return self.edges_inserted * self.levels

    def within_push_bound(self):
        return self.pushes <= self.push_bound()

    def snapshot(self):
        """Deterministic dict of all counters (no wall-clock data)."""
        out = {
            "n": self.n,
            "levels": self.levels,
            "m": self.edges_inserted,
            "K": self.edges_deleted,
            "d": self.deletion_batches,
            "insert_batches": self.insert_batches,
            "query_batches": self.query_batches,
            "queries": self.queries,
            "P": self.pushes,
            "delta": self.delta(),
            "push_bound": self.push_bound(),
            "push_bound_ok": self.within_push_bound(),
            "search_calls": self.search_calls,
            "phases": self.phases_total,
            "doubling_checks": self.doubling_checks,
            "doubling_violations": self.doubling_violations,
            "level_regressions": self.level_regressions,
            "deletion_batch_sizes": list(self.deletion_batch_sizes),
            "pushes_by_batch_level": {
                f"{b}:{i}": c for (b, i), c in sorted(self.pushes_by_batch_level.items())
            },
            "rounds_by_batch_level": {
                f"{b}:{i}": c for (b, i), c in sorted(self.rounds_by_batch_level.items())
            },
            "phases_by_batch_level": {
                f"{b}:{i}": c for (b, i), c in sorted(self.phases_by_batch_level.items())
            },
            "search_calls_by_batch_level": {
                f"{b}:{i}": c
                for (b, i), c in sorted(self.search_calls_by_batch_level.items())
            },
        }
        return out


@dataclass
class AuditReport:
    ok: bool
    failures: list = field(default_factory=list)

    def first(self):
        return self.failures[0] if self.failures else None


class _SuperMap:
    """Union-find over original split components with sizes and found edges.

    Tracks, per supercomponent, the replacement tree edges that merged it, so
    a pushing component can take every tree edge of its supercomponent down
    with it.
    """

    def __init__(self, sizes):
        self.parent = {h: h for h in sizes}
        self.sz = dict(sizes)
        self.tree_edges = {h: [] for h in sizes}

    def find(self, h):
        root = h
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[h] != root:
            self.parent[h], h = root, self.parent[h]
        return root

    def size(self, root):
        return self.sz[root]

    def union(self, a, b, edge):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            raise AssertionError("supercomponent union on merged components")
        if self.sz[ra] < self.sz[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.sz[ra] += self.sz[rb]
        self.tree_edges[ra].extend(self.tree_edges[rb])
        self.tree_edges[rb] = []
        self.tree_edges[ra].append(edge)
        return ra

    def take_tree_edges(self, root):
        out = self.tree_edges[root]
        self.tree_edges[root] = []
        return out


class LevelStructure:
    """The batch-dynamic connectivity structure."""

    def __init__(self, n: int, seed: int = 0, strategy: str = "simple"):
        if n < 1:
            raise InvalidVertexError(f"need at least one vertex, got n={n}")
        if strategy not in ("simple", "interleaved"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.n = n
        self.seed = seed
        self.strategy = strategy
        self.levels = max(1, (n - 1).bit_length())
        self.adj = AdjacencyStore()
        self.forests = {
            i: EulerTourForest(n, level=i, adj=self.adj, seed=seed)
            for i in range(1, self.levels + 1)
        }
        self.edges = BatchDictionary()
        self.counters = WorkCounters(n, self.levels)
        self._batch = None

    # ------------------------------------------------------------------
    # validation helpers
    # ------------------------------------------------------------------

    def _check_vertex(self, v):
        if not isinstance(v, int) or not (0 <= v < self.n):
            raise InvalidVertexError(f"vertex {v!r} outside [0, {self.n})")

    def _canon_batch(self, pairs, expect_present):
        out = []
        seen = set()
        for u, v in pairs:
            self._check_vertex(u)
            self._check_vertex(v)
            if u == v:
                raise SelfLoopError(f"self loop at {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdgeError(f"edge {key} repeated in batch")
            seen.add(key)
            if expect_present and key not in self.edges:
                raise MissingEdgeError(f"edge {key} not present")
            if not expect_present and key in self.edges:
                raise DuplicateEdgeError(f"edge {key} already present")
            out.append(key)
        return out

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    def batch_connected(self, queries):
        for u, v in queries:
            self._check_vertex(u)
            self._check_vertex(v)
        self.counters.query_batches += 1
        self.counters.queries += len(queries)
        return self.forests[self.levels].batch_connected(queries)

    # ------------------------------------------------------------------
    # insertion
    # ------------------------------------------------------------------

    def batch_insert(self, pairs):
        edges = self._canon_batch(pairs, expect_present=False)
        self.counters.insert_batches += 1
        if not edges:
            return
        top = self.levels
        fl = self.forests[top]
        self.counters.edges_inserted += len(edges)
        verts = []
        for u, v in edges:
            verts.append(u)
            verts.append(v)
        reprs = fl.batch_find_repr(verts)
        repr_pairs = [(reprs[2 * j], reprs[2 * j + 1]) for j in range(len(edges))]
        chosen, _ = spanning_forest(repr_pairs)
        chosen = set(chosen)
        records = []
        dict_ops = []
        for j, (u, v) in enumerate(edges):
            status = TREE if j in chosen else NONTREE
            rec = EdgeRecord(u, v, top, status)
            records.append(rec)
            dict_ops.append(("insert", (u, v), rec))
        self.edges.apply(dict_ops)
        # group array insertions by (endpoint, status) run
        keyed = []
        deltas = []
        for rec in records:
            keyed.append(((rec.u, rec.status), rec))
            keyed.append(((rec.v, rec.status), rec))
            deltas.append((rec.u, rec.status, 1))
            deltas.append((rec.v, rec.status, 1))
        grouped = semisort(keyed)
        run_key = None
        run = []
        for (vertex, status), rec in grouped + [((None, None), None)]:
            if (vertex, status) != run_key:
                if run:
                    self.adj.insert_edges(run_key[0], top, run_key[1], run)
                run_key = (vertex, status)
                run = []
            if rec is not None:
                run.append(rec)
        fl.adjust_edge_counts(deltas)
        fl.batch_link([rec.key for rec in records if rec.status == TREE])

    # ------------------------------------------------------------------
    # deletion
    # ------------------------------------------------------------------

    def batch_delete(self, pairs):
        keys = self._canon_batch(pairs, expect_present=True)
        records = [self.edges.get(k) for k in keys]
        b = self.counters.deletion_batches
        self.counters.deletion_batches += 1
        self.counters.edges_deleted += len(keys)
        self.counters.deletion_batch_sizes.append(len(keys))
        if not keys:
            return
        self._batch = b
        try:
            self.edges.apply([("delete", k) for k in keys])
            # drop adjacency entries and charges at each edge's own level
            deltas_by_level = {}
            for rec in records:
                self.adj.delete_edges(rec.u, rec.level, rec.status, [rec])
                self.adj.delete_edges(rec.v, rec.level, rec.status, [rec])
                deltas_by_level.setdefault(rec.level, []).extend(
                    [(rec.u, rec.status, -1), (rec.v, rec.status, -1)]
                )
            for lvl, deltas in sorted(deltas_by_level.items()):
                self.forests[lvl].adjust_edge_counts(deltas)
            tree_recs = [rec for rec in records if rec.status == TREE]
            if not tree_recs:
                return
            # cut each tree edge from every forest of its level and above
            for i in range(1, self.levels + 1):
                cuts = [rec.key for rec in tree_recs if rec.level <= i]
                if cuts:
                    self.forests[i].batch_cut(cuts)
            buckets = {}
            for rec in tree_recs:
                buckets.setdefault(rec.level, []).extend((rec.u, rec.v))
            carried = []
            found = []
            for i in range(min(buckets), self.levels + 1):
                incoming = carried + buckets.get(i, [])
                if self.strategy == "interleaved":
                    carried, found = self.interleaved_level_search(i, incoming, found)
                else:
                    carried, found = self.parallel_level_search(i, incoming, found)
        finally:
            self._batch = None

    # ------------------------------------------------------------------
    # shared search plumbing
    # ------------------------------------------------------------------

    def _group_components(self, i, handles):
        """Deduplicate handles by their current tree; keep the smallest."""
        if not handles:
            return []
        fi = self.forests[i]
        hs = sorted(set(handles))
        reprs = fi.batch_find_repr(hs)
        by_repr = {}
        for h, r in zip(hs, reprs):
            if r not in by_repr:
                by_repr[r] = h
        return list(by_repr.values())

    def _set_level(self, rec, new_level):
        if new_level != rec.level - 1:
            self.counters.level_regressions += 1
            raise AssertionError(
                f"level change {rec.level} -> {new_level} for ({rec.u},{rec.v})"
            )
        rec.level = new_level
        rec.levels_seen.append(new_level)
        self.counters.record_push(new_level + 1, self._batch)

    def _push_tree_edges(self, i, handle):
        """Move all level-i tree edges of handle's tree down to level i-1."""
        fi = self.forests[i]
        cnt = fi.num_tree_edges(handle)
        if cnt == 0:
            return 0
        edges = fi.fetch_level_edges(handle, cnt, TREE)
        fi.remove_level_edges(handle, edges, TREE)
        lower = self.forests[i - 1]
        deltas = []
        for rec in edges:
            self._set_level(rec, i - 1)
            self.adj.insert_edges(rec.u, i - 1, TREE, [rec])
            self.adj.insert_edges(rec.v, i - 1, TREE, [rec])
            deltas.append((rec.u, TREE, 1))
            deltas.append((rec.v, TREE, 1))
        lower.adjust_edge_counts(deltas)
        lower.batch_link([rec.key for rec in edges])
        return len(edges)

    def _push_nontree_edges(self, i, edges):
        if not edges:
            return
        fi = self.forests[i]
        fi.remove_level_edges(edges[0].u, edges, NONTREE)
        lower = self.forests[i - 1]
        deltas = []
        for rec in edges:
            self._set_level(rec, i - 1)
            self.adj.insert_edges(rec.u, i - 1, NONTREE, [rec])
            self.adj.insert_edges(rec.v, i - 1, NONTREE, [rec])
            deltas.append((rec.u, NONTREE, 1))
            deltas.append((rec.v, NONTREE, 1))
        lower.adjust_edge_counts(deltas)

    def _promote_to_tree(self, i, rec):
        """Flip a level-i non-tree edge to tree status (level unchanged)."""
        fi = self.forests[i]
        self.adj.delete_edges(rec.u, i, NONTREE, [rec])
        self.adj.delete_edges(rec.v, i, NONTREE, [rec])
        rec.status = TREE
        self.adj.insert_edges(rec.u, i, TREE, [rec])
        self.adj.insert_edges(rec.v, i, TREE, [rec])
        fi.adjust_edge_counts(
            [
                (rec.u, NONTREE, -1),
                (rec.v, NONTREE, -1),
                (rec.u, TREE, 1),
                (rec.v, TREE, 1),
            ]
        )

    def _replacements(self, i, window):
        """Edges of the window whose endpoints lie in different trees of F_i."""
        if not window:
            return []
        fi = self.forests[i]
        verts = []
        for rec in window:
            verts.append(rec.u)
            verts.append(rec.v)
        reprs = fi.batch_find_repr(verts)
        out = []
        for j, rec in enumerate(window):
            if reprs[2 * j] != reprs[2 * j + 1]:
                out.append(rec)
        return out

    # ------------------------------------------------------------------
    # replacement search, per-round doubling variant
    # ------------------------------------------------------------------

    def component_search(self, i, c, s=None):
        """Search component ``c`` for replacement edges among level-i non-tree edges.

        With ``s`` unset, runs doubling phases: each phase examines the first
        w available edges, moves the non-replacements down to level i-1, and
        stops at the first replacement (returned as a one-element list) or
        when everything has been examined (empty list). With ``s`` set,
        fetches the first min(s, available) edges once, pushes nothing, and
        returns every replacement among them.
        """
        fi = self.forests[i]
        self.counters.record_search_call(i, self._batch)
        if s is not None:
            w_max = fi.num_nontree_edges(c)
            w = min(s, w_max)
            if w == 0:
                return []
            window = fi.fetch_level_edges(c, w, NONTREE)
            return self._replacements(i, window)
        w = 1
        while True:
            w_max = fi.num_nontree_edges(c)
            if w_max == 0:
                return []
            self.counters.record_phase(i, self._batch)
            w_eff = min(w, w_max)
            window = fi.fetch_level_edges(c, w_eff, NONTREE)
            repl = self._replacements(i, window)
            if repl:
                repl_keys = {rec.key for rec in repl}
                rest = [rec for rec in window if rec.key not in repl_keys]
                self._push_nontree_edges(i, rest)
                return [repl[0]]
            self._push_nontree_edges(i, window)
            if w_eff >= w_max:
                return []
            w <<= 1

    def parallel_level_search(self, i, components, found):
        """Round-based replacement search at level i, eager level decreases.

        ``components`` are vertex handles of the disconnected pieces,
        ``found`` the replacement tree edges discovered at lower levels (not
        yet linked here). Returns (deactivated handles, found edges so far).
        """
        fi = self.forests[i]
        if found:
            fi.batch_link([rec.key for rec in found])
        half = 1 << (i - 1)
        groups = self._group_components(i, components)
        active = []
        done = []
        for h in groups:
            if fi.component_size(h) <= half:
                active.append(h)
            else:
                done.append(h)
        guard = 0
        while active:
            guard += 1
            if guard > 8 * (len(groups) + 40):
                raise AssertionError("level search failed to make progress")
            self.counters.record_round(i, self._batch)
            for h in active:
                self._push_tree_edges(i, h)
            replacements = []
            seen = set()
            for h in active:
                for rec in self.component_search(i, h):
                    if rec.key not in seen:
                        seen.add(rec.key)
                        replacements.append(rec)
            if replacements:
                verts = []
                for rec in replacements:
                    verts.append(rec.u)
                    verts.append(rec.v)
                reprs = fi.batch_find_repr(verts)
                pairs = [
                    (reprs[2 * j], reprs[2 * j + 1])
                    for j in range(len(replacements))
                ]
                chosen, _ = spanning_forest(pairs)
                selected = [replacements[j] for j in chosen]
                for rec in selected:
                    self._promote_to_tree(i, rec)
                fi.batch_link([rec.key for rec in selected])
                found.extend(selected)
            survivors = []
            for h in self._group_components(i, active):
                if fi.component_size(h) > half or fi.num_nontree_edges(h) == 0:
                    done.append(h)
                else:
                    survivors.append(h)
            active = survivors
        return done, found

    # ------------------------------------------------------------------
    # replacement search, interleaved variant
    # ------------------------------------------------------------------

    def interleaved_level_search(self, i, components, found):
        """Replacement search with one global doubling schedule per level.

        Forest insertions and level decreases are deferred: selected
        replacement edges accumulate in T and are linked here only at the end
        of the level, merged components are tracked in a supercomponent map,
        and each round's examined window is buffered for a level decrease
        only while the supercomponent is still small and unexhausted.
        Whenever a window is buffered, the tree edges merged into that
        supercomponent so far are buffered with it, which keeps every moved
        non-tree edge's forest path at or below its new level.
        """
        fi = self.forests[i]
        if found:
            fi.batch_link([rec.key for rec in found])
        half = 1 << (i - 1)
        groups = self._group_components(i, components)
        sizes = {}
        piece_by_repr = {}
        reprs = fi.batch_find_repr(groups) if groups else []
        for h, r in zip(groups, reprs):
            piece_by_repr[r] = h
            sizes[h] = fi.component_size(h)
        active = [h for h in groups if sizes[h] <= half]
        done = [h for h in groups if sizes[h] > half]
        for h in active:
            self._push_tree_edges(i, h)
        supers = _SuperMap(sizes)
        buffered = {}            # key -> record, insertion ordered
        selected_all = []        # T, in selection order
        selected_keys = set()
        r = 0
        prev_window = {}
        while active:
            w = 1 << r
            self.counters.record_round(i, self._batch)
            if r >= 1:
                need = 1 << (r - 1)
                for h in active:
                    self.counters.doubling_checks += 1
                    if prev_window.get(h, 0) < need:
                        self.counters.doubling_violations += 1
            windows = {}
            w_maxes = {}
            for h in active:
                self.counters.record_search_call(i, self._batch)
                w_max = fi.num_nontree_edges(h)
                w_maxes[h] = w_max
                windows[h] = (
                    fi.fetch_level_edges(h, min(w, w_max), NONTREE) if w_max else []
                )
            # classify replacements against the per-level piece partition
            ordered = []
            seen = set()
            for h in active:
                for rec in windows[h]:
                    if rec.key not in seen:
                        seen.add(rec.key)
                        ordered.append(rec)
            repl = self._replacements(i, ordered)
            # spanning forest over supercomponent labels; intra-super edges
            # become self loops and are never selected
            verts = []
            for rec in repl:
                verts.append(rec.u)
                verts.append(rec.v)
            end_reprs = fi.batch_find_repr(verts)
            pairs = []
            for j, rec in enumerate(repl):
                hu = piece_by_repr.get(end_reprs[2 * j])
                hv = piece_by_repr.get(end_reprs[2 * j + 1])
                if hu is None or hv is None:
                    # a level-i non-tree edge always joins trees of the
                    # incoming pieces; anything else is a structural bug
                    raise AssertionError(
                        f"window edge {rec.key} touches a tree outside the search"
                    )
                pairs.append((supers.find(hu), supers.find(hv)))
            chosen, _ = spanning_forest(pairs)
            for j in chosen:
                rec = repl[j]
                selected_all.append(rec)
                selected_keys.add(rec.key)
                supers.union(pairs[j][0], pairs[j][1], rec)
            # buffer windows (and their supercomponents' tree edges) while
            # the supercomponent stays small and the window was not the rest
            cur_window = {}
            for h in active:
                w_max = w_maxes[h]
                w_eff = min(w, w_max)
                root = supers.find(h)
                if supers.size(root) <= half and w_eff < w_max:
                    for rec in windows[h]:
                        self._buffer_push(i, rec, buffered)
                    for rec in supers.take_tree_edges(root):
                        self._buffer_push(i, rec, buffered)
                    cur_window[h] = len(windows[h])
                else:
                    cur_window[h] = 0
            survivors = []
            for h in active:
                exhausted = min(w, w_maxes[h]) >= w_maxes[h]
                if (
                    supers.size(supers.find(h)) > half
                    or exhausted
                    or fi.num_nontree_edges(h) == 0
                ):
                    done.append(h)
                else:
                    survivors.append(h)
            active = survivors
            prev_window = cur_window
            r += 1
        # level end: promote unmoved tree edges here, move the buffer down
        lower = self.forests[i - 1] if i > 1 else None
        for rec in selected_all:
            if rec.key not in buffered:
                self._promote_to_tree(i, rec)
        moved_tree = []
        deltas = []
        for key, rec in buffered.items():
            if key in selected_keys:
                rec.status = TREE
                moved_tree.append(rec)
                kind = TREE
            else:
                kind = NONTREE
            self.adj.insert_edges(rec.u, i - 1, kind, [rec])
            self.adj.insert_edges(rec.v, i - 1, kind, [rec])
            deltas.append((rec.u, kind, 1))
            deltas.append((rec.v, kind, 1))
        if deltas:
            lower.adjust_edge_counts(deltas)
        if moved_tree:
            lower.batch_link([rec.key for rec in moved_tree])
        fi.batch_link([rec.key for rec in selected_all])
        found.extend(selected_all)
        return done, found

    def _buffer_push(self, i, rec, buffered):
        """Pull a level-i non-tree entry out of its level into the buffer."""
        if rec.key in buffered:
            return 0
        buffered[rec.key] = rec
        self.adj.delete_edges(rec.u, i, NONTREE, [rec])
        self.adj.delete_edges(rec.v, i, NONTREE, [rec])
        self.forests[i].adjust_edge_counts(
            [(rec.u, NONTREE, -1), (rec.v, NONTREE, -1)]
        )
        self._set_level(rec, i - 1)
        return 1

    # ------------------------------------------------------------------
    # audit
    # ------------------------------------------------------------------

    def live_edges(self):
        return sorted(self.edges.keys())

    def audit(self) -> AuditReport:
        """Verify every maintained invariant; collects labeled failures."""
        failures = []
        recs = [rec for _, rec in sorted(self.edges.items())]
        by_level = {}
        for rec in recs:
            by_level.setdefault(rec.level, []).append(rec)
        # component size bound: components of G_i must have <= 2^i vertices
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        size = [1] * self.n
        for i in range(1, self.levels + 1):
            for rec in by_level.get(i, []):
                ru, rv = find(rec.u), find(rec.v)
                if ru != rv:
                    parent[rv] = ru
                    size[ru] += size[rv]
            cap = 1 << i
            for v in range(self.n):
                if parent[v] == v and size[v] > cap:
                    failures.append(
                        f"component-size-bound: level {i} component of {size[v]} > {cap}"
                    )
                    break
        # minimality: a non-tree edge's endpoints are connected in the forest
        # of its level (tree-path levels never exceed the edge's level)
        tparent = list(range(self.n))

        def tfind(x):
            while tparent[x] != x:
                tparent[x] = tparent[tparent[x]]
                x = tparent[x]
            return x

        for i in range(1, self.levels + 1):
            for rec in by_level.get(i, []):
                if rec.status == TREE:
                    ru, rv = tfind(rec.u), tfind(rec.v)
                    if ru == rv:
                        failures.append(f"minimality: tree edge {rec.key} closes a cycle")
                    else:
                        tparent[rv] = ru
            for rec in by_level.get(i, []):
                if rec.status == NONTREE and tfind(rec.u) != tfind(rec.v):
                    failures.append(
                        f"minimality: non-tree edge {rec.key} at level {i} "
                        f"not connected by tree edges of level <= {i}"
                    )
        # nesting: forest i holds exactly the tree edges of level <= i
        want = set()
        for i in range(1, self.levels + 1):
            want |= {rec.key for rec in by_level.get(i, []) if rec.status == TREE}
            got = set(self.forests[i].edge_pairs())
            if got != want:
                failures.append(
                    f"nesting: forest {i} links {sorted(got ^ want)} unexpectedly"
                )
        # per-forest structure: tour validity and augmented sums
        for i in range(1, self.levels + 1):
            for problem in self.forests[i].audit():
                failures.append(f"forest {i}: {problem}")
        # adjacency arrays: density, back-indices, membership, charges
        for problem in self.adj.audit():
            failures.append(problem)
        counted = {}
        for (vertex, level, kind), arr in self.adj.arrays():
            for j in range(arr.count):
                rec = arr.slots[j]
                if rec.level != level or rec.status != kind or vertex not in (rec.u, rec.v):
                    failures.append(
                        f"arrays: edge {rec.key} misfiled under {(vertex, level, kind)}"
                    )
                if rec.key not in self.edges:
                    failures.append(f"arrays: stale edge {rec.key}")
            counted[(vertex, level, kind)] = arr.count
        for rec in recs:
            for vertex in (rec.u, rec.v):
                if rec.pos.get(vertex) is None:
                    failures.append(f"arrays: edge {rec.key} missing from vertex {vertex}")
        for i in range(1, self.levels + 1):
            fi = self.forests[i]
            for v in range(self.n):
                row = fi._loops[v].aug[0]
                if row[0] != counted.get((v, i, NONTREE), 0):
                    failures.append(
                        f"charges: vertex {v} level {i} nontree {row[0]} != array"
                    )
                if row[1] != counted.get((v, i, TREE), 0):
                    failures.append(
                        f"charges: vertex {v} level {i} tree {row[1]} != array"
                    )
        # per-edge level monotonicity and the global push bound
        for rec in recs:
            hist = rec.levels_seen
            if any(hist[j] <= hist[j + 1] for j in range(len(hist) - 1)):
                failures.append(f"level-monotonic: edge {rec.key} history {hist}")
        if not self.counters.within_push_bound():
            failures.append(
                f"push-bound: P={self.counters.pushes} exceeds "
                f"m*L={self.counters.push_bound()}"
            )
        if self.counters.level_regressions:
            failures.append("push-bound: recorded level regressions")
        return AuditReport(ok=not failures, failures=failures)
