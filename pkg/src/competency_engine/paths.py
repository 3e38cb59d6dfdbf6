"""Deterministic personalized learning paths.

The path is a full plan over the cluster DAG: every cluster that still has a
non-mastered member appears exactly once, prerequisites always before
dependents.  Among ready clusters the one with the lowest mastery summary
goes first (weakest first), ties broken by smallest cluster id, so the plan
is reproducible for fixed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Collection, Iterable, Mapping, Optional

from .errors import CyclicGraph
from .events import (
    EventLog,
    LearningResource,
    ResourceKind,
    completion_status,
    participation_status,
)
from .graph import CompetencyGraph
from .metrics import (
    CompetencyLink,
    CompetencyProgress,
    LinkKind,
    MetricConfig,
    competency_progress,
)
from .timeutil import format_timestamp


@dataclass(frozen=True)
class PathEntry:
    """One pending cluster: its members, how close the weakest member is to
    mastery, and the not-yet-done resources to work on."""

    cluster_id: str
    competency_ids: tuple[str, ...]
    mastery_summary: float
    recommended_resources: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "competency_ids": list(self.competency_ids),
            "mastery_summary": self.mastery_summary,
            "recommended_resources": list(self.recommended_resources),
        }


@dataclass(frozen=True)
class LearningPath:
    student_id: str
    course_id: str
    generated_at: datetime
    entries: tuple[PathEntry, ...]

    def to_dict(self) -> dict:
        return {
            "student_id": self.student_id,
            "course_id": self.course_id,
            "generated_at": format_timestamp(self.generated_at),
            "entries": [entry.to_dict() for entry in self.entries],
        }


def ready_set(graph: CompetencyGraph, mastery_map: Mapping[str, bool]) -> set[str]:
    """Cluster ids that are not fully mastered but have all prerequisite
    clusters fully mastered (every member mastered)."""
    for competency_id in graph.competencies:
        if competency_id not in mastery_map:
            raise ValueError(f"mastery_map does not cover competency {competency_id!r}")
    clusters = graph.match_clusters()
    mastered_clusters = {
        c.id for c in clusters if all(mastery_map[m] for m in c.members)
    }
    prereqs = _cluster_prerequisites(graph)
    return {
        c.id
        for c in clusters
        if c.id not in mastered_clusters
        and prereqs.get(c.id, set()) <= mastered_clusters
    }


def generate_path(
    student_id: str,
    graph: CompetencyGraph,
    links: Iterable[CompetencyLink],
    resources: Mapping[str, LearningResource],
    log: EventLog,
    config: MetricConfig,
    query_time: datetime,
    grants: Collection[str] = (),
) -> LearningPath:
    """Build the student's full plan of pending clusters.

    ``grants`` holds the competency ids this student was manually granted
    mastery for.  Fully mastered clusters are skipped; the rest are emitted
    in prerequisite order, lowest mastery summary first among ready ones
    (clusters already emitted count as mastered for readiness).
    """
    links = list(links)
    links_by_competency: dict[str, list[CompetencyLink]] = {}
    for link in links:
        links_by_competency.setdefault(link.competency_id, []).append(link)

    metrics_by_competency: dict[str, CompetencyProgress] = {
        cid: competency_progress(
            student_id,
            competency,
            links_by_competency.get(cid, []),
            resources,
            log,
            config,
            query_time,
            manual_grant=cid in grants,
        )
        for cid, competency in graph.competencies.items()
    }

    clusters = {c.id: c for c in graph.match_clusters()}
    prereqs = _cluster_prerequisites(graph)

    def summary(cluster_id: str) -> float:
        return min(
            min(metrics_by_competency[m].mastery, 1.0)
            for m in clusters[cluster_id].members
        )

    done = {
        cid
        for cid, cluster in clusters.items()
        if all(metrics_by_competency[m].mastered for m in cluster.members)
    }
    pending = set(clusters) - done
    entries: list[PathEntry] = []
    while pending:
        ready = [
            cid for cid in pending if prereqs.get(cid, set()) <= done
        ]
        if not ready:
            raise CyclicGraph("pending clusters have unsatisfiable prerequisites")
        chosen = min(ready, key=lambda cid: (summary(cid), cid))
        entries.append(
            PathEntry(
                cluster_id=chosen,
                competency_ids=clusters[chosen].members,
                mastery_summary=summary(chosen),
                recommended_resources=_recommended_resources(
                    student_id,
                    clusters[chosen].members,
                    links_by_competency,
                    resources,
                    log,
                    query_time,
                ),
            )
        )
        pending.remove(chosen)
        done.add(chosen)
    return LearningPath(
        student_id=student_id,
        course_id=graph.course_id,
        generated_at=query_time,
        entries=tuple(entries),
    )


def recommend_next(
    student_id: str,
    graph: CompetencyGraph,
    links: Iterable[CompetencyLink],
    resources: Mapping[str, LearningResource],
    log: EventLog,
    config: MetricConfig,
    query_time: datetime,
    grants: Collection[str] = (),
) -> Optional[str]:
    """First resource of the first path entry that still has work to do."""
    path = generate_path(
        student_id, graph, links, resources, log, config, query_time, grants
    )
    for entry in path.entries:
        if entry.recommended_resources:
            return entry.recommended_resources[0]
    return None


def _cluster_prerequisites(graph: CompetencyGraph) -> dict[str, set[str]]:
    """cluster id -> ids of clusters that must be mastered before it."""
    prereqs: dict[str, set[str]] = {}
    for before, after in graph.cluster_edges():
        prereqs.setdefault(after, set()).add(before)
    return prereqs


def _recommended_resources(
    student_id: str,
    members: tuple[str, ...],
    links_by_competency: Mapping[str, list[CompetencyLink]],
    resources: Mapping[str, LearningResource],
    log: EventLog,
    query_time: datetime,
) -> tuple[str, ...]:
    """Union of the members' linked resources the student has not finished.

    Prerequisite-kind links come first, then learning goals; a resource
    linked under both kinds (via different members) counts as prerequisite.
    Each group is sorted by (order_index, resource id).
    """
    kind_by_resource: dict[str, LinkKind] = {}
    for member in members:
        for link in links_by_competency.get(member, []):
            current = kind_by_resource.get(link.resource_id)
            if current is None or link.kind is LinkKind.PREREQUISITE:
                kind_by_resource[link.resource_id] = link.kind

    def unfinished(resource: LearningResource) -> bool:
        if resource.kind is ResourceKind.EXERCISE:
            return not participation_status(log, student_id, resource, upto=query_time)
        return not completion_status(log, student_id, resource, query_time).completed

    groups: dict[LinkKind, list[LearningResource]] = {
        LinkKind.PREREQUISITE: [],
        LinkKind.LEARNING_GOAL: [],
    }
    for resource_id, kind in kind_by_resource.items():
        resource = resources[resource_id]
        if unfinished(resource):
            groups[kind].append(resource)
    ordered = []
    for kind in (LinkKind.PREREQUISITE, LinkKind.LEARNING_GOAL):
        ordered.extend(
            r.id for r in sorted(groups[kind], key=lambda r: (r.order_index, r.id))
        )
    return tuple(ordered)
