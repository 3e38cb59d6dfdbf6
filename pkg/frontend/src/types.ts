/** Wire types mirroring the engine's HTTP JSON bodies. */

export type RelationType = "ASSUMES" | "EXTENDS" | "RELATES" | "MATCHES";

export type Taxonomy =
  | "REMEMBER"
  | "UNDERSTAND"
  | "APPLY"
  | "ANALYZE"
  | "EVALUATE"
  | "CREATE";

export interface GraphNode {
  id: string;
  title: string;
  taxonomy: Taxonomy;
  threshold: number;
}

export interface GraphEdge {
  id: string;
  tail: string;
  head: string;
  type: RelationType;
}

export interface GraphDocument {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface RingValues {
  blue: number;
  green: number;
  red: number;
}

export interface CompetencyProgress {
  competency_id: string;
  P: number;
  C: number;
  M: number;
  mastered: boolean;
  rings: RingValues;
}

export interface ResourceStatus {
  resource_id: string;
  kind: string;
  title: string;
  order_index: number;
  completed?: boolean;
  source?: string;
  participated?: boolean;
  latest_score?: number | null;
}

export interface ProgressReport {
  course_id: string;
  student_id: string;
  query_time: string;
  competencies: CompetencyProgress[];
  resources: ResourceStatus[];
}

export interface PathEntry {
  cluster_id: string;
  competency_ids: string[];
  mastery_summary: number;
  recommended_resources: string[];
}

export interface LearningPath {
  student_id: string;
  course_id: string;
  generated_at: string;
  entries: PathEntry[];
}

export interface ApiError {
  code: string;
  message: string;
}

export interface EventRecord {
  event_id: string;
  student_id: string;
  resource_id: string;
  kind: string;
  timestamp: string;
  score?: number;
}

export interface AppendResult {
  accepted: number;
  duplicates: number;
  rejected: Array<{ index: number; code: string; message: string; event_id?: string }>;
}
