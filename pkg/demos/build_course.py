"""Walk through the engine's core pieces on a tiny hand-built course.

Run with:  python3 demos/build_course.py
"""

from datetime import datetime, timedelta, timezone

from competency_engine import (
    CompetencyGraph,
    CompetencyLink,
    EventKind,
    EventLog,
    InteractionEvent,
    LearningResource,
    LinkKind,
    MetricConfig,
    ResourceKind,
    competency_progress,
    generate_path,
    recommend_next,
)
from competency_engine.errors import CycleIntroduced, DuplicateRelation

NOW = datetime(2026, 3, 2, 9, 0, tzinfo=timezone.utc)

# --- 1. the relation graph ---------------------------------------------------

graph = CompetencyGraph("demo-course")
graph.create_competency("Iteration", taxonomy="APPLY", threshold=0.8, competency_id="iter")
graph.create_competency("Recursion", taxonomy="APPLY", threshold=0.8, competency_id="rec")
graph.create_competency("Repetition", taxonomy="APPLY", threshold=0.8, competency_id="rep")
graph.create_competency("Trees", taxonomy="ANALYZE", threshold=0.7, competency_id="tree")

graph.add_relation("rec", "iter", "ASSUMES")   # read: "rec assumes iter"
graph.add_relation("tree", "rec", "EXTENDS")   # base before extension
graph.add_relation("iter", "rep", "MATCHES")   # identical -> one cluster

print("clusters:", [(c.id, c.members) for c in graph.match_clusters()])
print("prerequisite order:", [c.id for c in graph.prerequisite_order()])

try:
    graph.add_relation("iter", "rec", "ASSUMES")
except CycleIntroduced as err:
    print("cycle rejected:", err.code)
try:
    graph.add_relation("rec", "iter", "ASSUMES")
except DuplicateRelation as err:
    print("duplicate rejected:", err.code)

# --- 2. resources, links, events ------------------------------------------------

resources = {
    "video": LearningResource("video", "demo-course", ResourceKind.VIDEO_UNIT, "Intro video"),
    "quiz": LearningResource("quiz", "demo-course", ResourceKind.EXERCISE, "Quiz",
                             order_index=1, max_points=10),
}
links = [
    CompetencyLink("iter", "video", LinkKind.PREREQUISITE),
    CompetencyLink("iter", "quiz", LinkKind.LEARNING_GOAL),
]
log = EventLog(resources)
log.ingest(InteractionEvent("e1", "alice", "video", EventKind.VIDEO_REVEAL, NOW))
log.ingest(InteractionEvent("e2", "alice", "quiz", EventKind.EXERCISE_SUBMISSION,
                            NOW + timedelta(minutes=7), score=0.6))

# --- 3. metrics: the three rings ----------------------------------------------------

config = MetricConfig()  # mastery weight 2/3
at = NOW + timedelta(minutes=10)  # the video matured at +5:00
bundle = competency_progress("alice", graph.competency("iter"), links, resources,
                             log, config, at)
print(f"P={bundle.progress:.2f} C={bundle.confidence:.2f} M={bundle.mastery:.4f} "
      f"mastered={bundle.mastered}")
print(f"rings: blue={bundle.rings.blue:.2f} green={bundle.rings.green:.2f} "
      f"red={bundle.rings.red:.2f}")

# --- 4. the personalized path ----------------------------------------------------------

path = generate_path("alice", graph, links, resources, log, config, at)
for entry in path.entries:
    print(f"path entry {entry.cluster_id}: members={entry.competency_ids} "
          f"todo={entry.recommended_resources}")
print("next recommendation:", recommend_next("alice", graph, links, resources,
                                             log, config, at))
