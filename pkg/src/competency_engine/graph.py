"""Typed competency relation graphs.

A course's competencies are nodes; instructors connect them with directed,
typed relations.  The four types split into two families:

* ordering types (``ASSUMES``, ``EXTENDS``): directed, ``tail <type> head``
  reads as natural language, so the head must be learned first;
* symmetric types (``RELATES``, ``MATCHES``): stored with canonical
  orientation (smaller id as tail).  ``MATCHES`` merges competencies into
  clusters; ``RELATES`` is annotation only.

Validation is done at insertion time: no reflexive relation, at most one
relation of each type per pair (ordered pair for ordering types, unordered
for symmetric ones), and the cluster-level ordering graph stays acyclic.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from heapq import heappop, heappush
from typing import Iterable, Optional

from .errors import (
    CycleIntroduced,
    CyclicGraph,
    DuplicateId,
    DuplicateRelation,
    EmptyTitle,
    ReflexiveRelation,
    ThresholdOutOfRange,
    UnknownCompetency,
    UnknownRelation,
)


class Taxonomy(str, Enum):
    """Bloom's revised taxonomy levels, lowest to highest."""

    REMEMBER = "REMEMBER"
    UNDERSTAND = "UNDERSTAND"
    APPLY = "APPLY"
    ANALYZE = "ANALYZE"
    EVALUATE = "EVALUATE"
    CREATE = "CREATE"

    @classmethod
    def parse(cls, value: "Taxonomy | str") -> "Taxonomy":
        if isinstance(value, Taxonomy):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown taxonomy level {value!r}") from None


class RelationType(str, Enum):
    ASSUMES = "ASSUMES"
    EXTENDS = "EXTENDS"
    RELATES = "RELATES"
    MATCHES = "MATCHES"

    @classmethod
    def parse(cls, value: "RelationType | str") -> "RelationType":
        if isinstance(value, RelationType):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown relation type {value!r}") from None

    @property
    def symmetric(self) -> bool:
        return self in (RelationType.RELATES, RelationType.MATCHES)

    @property
    def orders(self) -> bool:
        """Whether the type contributes prerequisite ordering (head first)."""
        return self in (RelationType.ASSUMES, RelationType.EXTENDS)


def validate_threshold(threshold: float) -> float:
    """Mastery thresholds live in (0, 1]."""
    try:
        t = float(threshold)
    except (TypeError, ValueError):
        raise ThresholdOutOfRange(f"threshold must be a number, got {threshold!r}") from None
    if not 0.0 < t <= 1.0:
        raise ThresholdOutOfRange(f"threshold must be in (0, 1], got {t}")
    return t


@dataclass(frozen=True)
class Competency:
    """A named learning objective; node of the relation graph."""

    id: str
    course_id: str
    title: str
    description: str
    taxonomy: Taxonomy
    mastery_threshold: float

    def __post_init__(self):
        if not self.title or not self.title.strip():
            raise EmptyTitle("competency title must be non-empty")
        validate_threshold(self.mastery_threshold)


@dataclass(frozen=True)
class Relation:
    """Directed typed edge between two competencies of one course."""

    id: str
    tail_id: str
    head_id: str
    type: RelationType


@dataclass(frozen=True)
class MatchCluster:
    """Equivalence class of competencies under transitive MATCHES edges.

    The cluster id is the smallest member id, so ids are stable and
    deterministic regardless of how the graph was built.
    """

    id: str
    members: tuple[str, ...]


def derive_relation_id(tail_id: str, head_id: str, rel_type: RelationType) -> str:
    """Content-derived relation id.

    Because at most one relation of each type exists per pair, the triple
    identifies the relation; deriving the id from it keeps ids identical
    across graphs built in different insertion orders.
    """
    return f"{rel_type.value.lower()}:{tail_id}:{head_id}"


class CompetencyGraph:
    """Competencies plus validated typed relations for a single course.

    Mutations validate first and only then commit, so a rejected call never
    leaves a partial change behind.  All derived views (clusters, ordering,
    export document) are deterministic functions of the current contents.
    """

    def __init__(self, course_id: str):
        self.course_id = course_id
        self._competencies: dict[str, Competency] = {}
        self._relations: dict[str, Relation] = {}

    # --- competencies -------------------------------------------------

    @property
    def competencies(self) -> dict[str, Competency]:
        return dict(self._competencies)

    @property
    def relations(self) -> dict[str, Relation]:
        return dict(self._relations)

    def competency(self, competency_id: str) -> Competency:
        try:
            return self._competencies[competency_id]
        except KeyError:
            raise UnknownCompetency(f"no competency {competency_id!r} in course {self.course_id!r}") from None

    def add_competency(self, competency: Competency) -> Competency:
        if competency.course_id != self.course_id:
            raise ValueError(
                f"competency {competency.id!r} belongs to course {competency.course_id!r}, "
                f"not {self.course_id!r}"
            )
        if competency.id in self._competencies:
            raise DuplicateId(f"competency id {competency.id!r} already exists")
        self._competencies[competency.id] = competency
        return competency

    def create_competency(
        self,
        title: str,
        description: str = "",
        taxonomy: Taxonomy | str = Taxonomy.UNDERSTAND,
        threshold: float = 0.8,
        competency_id: Optional[str] = None,
    ) -> Competency:
        """Add a competency, generating a fresh unique id if none is given."""
        if competency_id is None:
            competency_id = self._fresh_competency_id()
        competency = Competency(
            id=competency_id,
            course_id=self.course_id,
            title=title,
            description=description,
            taxonomy=Taxonomy.parse(taxonomy),
            mastery_threshold=float(threshold),
        )
        return self.add_competency(competency)

    def _fresh_competency_id(self) -> str:
        n = len(self._competencies) + 1
        while f"comp-{n}" in self._competencies:
            n += 1
        return f"comp-{n}"

    def update_competency(
        self,
        competency_id: str,
        title: Optional[str] = None,
        description: Optional[str] = None,
        taxonomy: Taxonomy | str | None = None,
        threshold: Optional[float] = None,
    ) -> Competency:
        """Partial update; id and course are immutable."""
        current = self.competency(competency_id)
        updated = replace(
            current,
            title=current.title if title is None else title,
            description=current.description if description is None else description,
            taxonomy=current.taxonomy if taxonomy is None else Taxonomy.parse(taxonomy),
            mastery_threshold=current.mastery_threshold if threshold is None else float(threshold),
        )
        self._competencies[competency_id] = updated
        return updated

    def remove_competency(self, competency_id: str) -> list[Relation]:
        """Remove a competency and all relations touching it.

        Returns the removed relations; removal never violates an invariant.
        """
        self.competency(competency_id)
        removed = [
            rel for rel in self._relations.values()
            if competency_id in (rel.tail_id, rel.head_id)
        ]
        for rel in removed:
            del self._relations[rel.id]
        del self._competencies[competency_id]
        return removed

    # --- relations ------------------------------------------------------

    def add_relation(
        self,
        tail_id: str,
        head_id: str,
        rel_type: RelationType | str,
        relation_id: Optional[str] = None,
    ) -> Relation:
        """Add a validated relation; reads as "tail <type> head".

        For ASSUMES/EXTENDS the head is the prerequisite side.  Symmetric
        types are canonicalized to the smaller id as tail before the
        duplicate check, so unordered uniqueness is enforceable.
        """
        rel_type = RelationType.parse(rel_type)
        if tail_id == head_id:
            raise ReflexiveRelation(f"relation cannot be reflexive ({tail_id!r})")
        self.competency(tail_id)
        self.competency(head_id)
        if rel_type.symmetric and head_id < tail_id:
            tail_id, head_id = head_id, tail_id
        derived = derive_relation_id(tail_id, head_id, rel_type)
        for existing in self._relations.values():
            if existing.type is rel_type and (existing.tail_id, existing.head_id) == (tail_id, head_id):
                raise DuplicateRelation(
                    f"{rel_type.value} relation between {tail_id!r} and {head_id!r} already exists"
                )
        relation = Relation(
            id=relation_id if relation_id is not None else derived,
            tail_id=tail_id,
            head_id=head_id,
            type=rel_type,
        )
        if relation.id in self._relations:
            raise DuplicateId(f"relation id {relation.id!r} already exists")
        if rel_type is not RelationType.RELATES:
            self._reject_if_cycle(relation)
        self._relations[relation.id] = relation
        return relation

    def relation(self, relation_id: str) -> Relation:
        try:
            return self._relations[relation_id]
        except KeyError:
            raise UnknownRelation(f"no relation {relation_id!r} in course {self.course_id!r}") from None

    def remove_relation(self, relation_id: str) -> Relation:
        """Remove one relation; removal can never violate an invariant."""
        relation = self.relation(relation_id)
        del self._relations[relation_id]
        return relation

    def _reject_if_cycle(self, candidate: Relation) -> None:
        """Reject the candidate if the cluster-level ordering graph with it
        would contain a cycle (a self-loop counts: an ordering edge inside
        one cluster)."""
        relations = list(self._relations.values()) + [candidate]
        cluster_of = _connected_components(
            self._competencies.keys(),
            [(r.tail_id, r.head_id) for r in relations if r.type is RelationType.MATCHES],
        )
        edges = set()
        for rel in relations:
            if not rel.type.orders:
                continue
            head_cluster = cluster_of[rel.head_id]
            tail_cluster = cluster_of[rel.tail_id]
            if head_cluster == tail_cluster:
                raise CycleIntroduced(
                    f"{rel.type.value} relation {rel.tail_id!r} -> {rel.head_id!r} "
                    f"orders competencies inside one matches-cluster"
                )
            edges.add((head_cluster, tail_cluster))
        if _has_cycle(set(cluster_of.values()), edges):
            raise CycleIntroduced(
                f"{candidate.type.value} relation {candidate.tail_id!r} -> "
                f"{candidate.head_id!r} would close a prerequisite cycle"
            )

    # --- derived views ------------------------------------------------------

    def match_clusters(self) -> list[MatchCluster]:
        """Partition of competencies into MATCHES-connected components,
        sorted by cluster id."""
        cluster_of = _connected_components(
            self._competencies.keys(),
            [
                (r.tail_id, r.head_id)
                for r in self._relations.values()
                if r.type is RelationType.MATCHES
            ],
        )
        members: dict[str, list[str]] = {}
        for node, cluster_id in cluster_of.items():
            members.setdefault(cluster_id, []).append(node)
        return [
            MatchCluster(id=cid, members=tuple(sorted(ids)))
            for cid, ids in sorted(members.items())
        ]

    def cluster_map(self) -> dict[str, str]:
        """competency id -> cluster id."""
        return {
            member: cluster.id
            for cluster in self.match_clusters()
            for member in cluster.members
        }

    def cluster_edges(self) -> set[tuple[str, str]]:
        """Prerequisite edges between clusters: (before, after)."""
        cluster_of = self.cluster_map()
        return {
            (cluster_of[r.head_id], cluster_of[r.tail_id])
            for r in self._relations.values()
            if r.type.orders
        }

    def prerequisite_order(self) -> list[MatchCluster]:
        """Kahn topological order over the cluster DAG.

        Among ready clusters the smallest cluster id goes first, which makes
        the order the lexicographically smallest valid one.
        """
        clusters = {c.id: c for c in self.match_clusters()}
        edges = self.cluster_edges()
        indegree = {cid: 0 for cid in clusters}
        outgoing: dict[str, list[str]] = {cid: [] for cid in clusters}
        for before, after in edges:
            outgoing[before].append(after)
            indegree[after] += 1
        ready: list[str] = []
        for cid in clusters:
            if indegree[cid] == 0:
                heappush(ready, cid)
        order: list[MatchCluster] = []
        while ready:
            cid = heappop(ready)
            order.append(clusters[cid])
            for nxt in outgoing[cid]:
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    heappush(ready, nxt)
        if len(order) != len(clusters):
            raise CyclicGraph("cluster ordering graph contains a cycle")
        return order

    # --- portable document -----------------------------------------------------

    def export_document(self) -> dict:
        """Portable graph document for the UI renderer and golden tests.

        Nodes and edges are sorted by id and keys appear in a stable order.
        """
        nodes = [
            {
                "id": c.id,
                "title": c.title,
                "taxonomy": c.taxonomy.value,
                "threshold": c.mastery_threshold,
            }
            for c in sorted(self._competencies.values(), key=lambda c: c.id)
        ]
        edges = [
            {
                "id": r.id,
                "tail": r.tail_id,
                "head": r.head_id,
                "type": r.type.value,
            }
            for r in sorted(self._relations.values(), key=lambda r: r.id)
        ]
        return {"nodes": nodes, "edges": edges}


def graph_from_document(course_id: str, document: dict) -> CompetencyGraph:
    """Build a graph from a portable document, re-running all validation.

    Node descriptions are not part of the portable document, so imported
    competencies carry empty descriptions; export o import o export is a
    fixpoint.
    """
    graph = CompetencyGraph(course_id)
    for node in document.get("nodes", []):
        graph.create_competency(
            title=node["title"],
            description=node.get("description", ""),
            taxonomy=node["taxonomy"],
            threshold=node["threshold"],
            competency_id=node["id"],
        )
    for edge in document.get("edges", []):
        graph.add_relation(
            tail_id=edge["tail"],
            head_id=edge["head"],
            rel_type=edge["type"],
            relation_id=edge.get("id"),
        )
    return graph


# --- small graph helpers --------------------------------------------------------


def _connected_components(
    nodes: Iterable[str], edges: Iterable[tuple[str, str]]
) -> dict[str, str]:
    """BFS connected components; component id = smallest member."""
    adjacency: dict[str, set[str]] = {node: set() for node in nodes}
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)
    component_of: dict[str, str] = {}
    for start in sorted(adjacency):
        if start in component_of:
            continue
        seen = {start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for neighbor in adjacency[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    queue.append(neighbor)
        root = min(seen)
        for node in seen:
            component_of[node] = root
    return component_of


def _has_cycle(nodes: Iterable[str], edges: set[tuple[str, str]]) -> bool:
    """Kahn-style peel; leftover nodes mean a cycle."""
    indegree = {node: 0 for node in nodes}
    outgoing: dict[str, list[str]] = {node: [] for node in indegree}
    for a, b in edges:
        outgoing[a].append(b)
        indegree[b] += 1
    queue = deque(node for node, deg in indegree.items() if deg == 0)
    visited = 0
    while queue:
        node = queue.popleft()
        visited += 1
        for nxt in outgoing[node]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                queue.append(nxt)
    return visited != len(indegree)
