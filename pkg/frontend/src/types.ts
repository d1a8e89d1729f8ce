// Shapes mirror the session service's JSON responses exactly.

export interface MentionData {
  surface: string;
  frequency: number;
}

export interface ClusterData {
  representative: string;
  mentions: MentionData[];
}

export interface TripleData {
  index: number;
  subject: ClusterData;
  relation: string;
  object: ClusterData;
  source_line: string;
}

export interface GraphNodeData {
  id: string;
  label: string;
  weight: number;
  size: number;
  mentions: string[];
}

export interface GraphEdgeData {
  source: string;
  target: string;
  label: string;
}

export interface GraphData {
  nodes: GraphNodeData[];
  edges: GraphEdgeData[];
}

export interface SentenceData {
  index: number;
  text: string;
  start: number;
  end: number;
}

export interface SummaryData {
  version: number;
  text: string;
  provenance: string;
  request_id: number | null;
  sentences: SentenceData[];
}

export type FactVerdict = 'verified' | 'unverified' | 'pending';

export interface FactData {
  text: string;
  sentence_index: number;
  verdict: FactVerdict;
}

export interface ReportData {
  compression: number;
  coverage: number;
  consistency: number;
  facts: FactData[];
  flagged_sentences: number[];
}

export interface DocumentData {
  id: string;
  title: string | null;
  body: string;
}

export type SessionPhase = 'created' | 'analyzed' | 'summarized';

export interface SessionSnapshot {
  id: string;
  created_at: string;
  phase: SessionPhase;
  documents: DocumentData[];
  triples: TripleData[];
  clusters: ClusterData[];
  graph: GraphData | null;
  summaries: SummaryData[];
  reports: Record<string, ReportData>;
  warnings: Array<{ line: string; reason: string }>;
}

// Tri-state checkbox per triple: neutral, include ("o"), exclude ("×").
export type TriState = 'neutral' | 'include' | 'exclude';

export interface RefinePayload {
  include: number[];
  exclude: number[];
  freeform?: string;
}
