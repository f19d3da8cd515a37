/** Wire types for the visualization service, version 1 interchange. */

export interface AttrRow {
  key: string;
  text: string;
  constraints: string[];
}

export interface InterchangeNode {
  id: string;
  varId: number | null;
  title: string;
  role: "output" | "input";
  attrRows: AttrRow[];
  blockId: number;
  groupId: string | null;
  spanKey: string | null;
  layer: number;
  order: number;
  x: number;
  y: number;
  width: number;
  height: number;
  rowAnchors: Record<string, number>;
}

export interface InterchangeEdge {
  id: string;
  source: { node: string; attr: string };
  target: { node: string; attr: string };
  op: string;
  binding: boolean;
  spanKey: string | null;
}

export interface InterchangeGroup {
  id: string;
  blockId: number;
  kind: string;
  style: string;
  shade: number;
  depth: number;
  members: string[];
  children: string[];
  parent: string | null;
  spanKey: string | null;
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface Interchange {
  version: string;
  dialect: string;
  source: string;
  width: number;
  height: number;
  crossings: number;
  nodes: InterchangeNode[];
  edges: InterchangeEdge[];
  groups: InterchangeGroup[];
  arrows: { id: string; source: string; target: string }[];
  blocks: unknown[];
  spans: Record<string, [number, number]>;
  stats: Record<string, number>;
}

export interface Diagnostic {
  severity: "error" | "warning";
  code: string;
  message: string;
  start: number | null;
  end: number | null;
}

export interface VisualizeResponse {
  svg: string | null;
  interchange: Interchange | null;
  diagnostics: Diagnostic[];
}

export interface VisualizeRequest {
  sql: string;
  dialect: string;
  forall: boolean;
}

/** One editor range tied to one diagram element, straight from the
 * interchange spans table.  Links are never computed from the SQL text. */
export interface HighlightLink {
  spanStart: number;
  spanEnd: number;
  diagramElementId: string;
  elementKind: "node" | "edge" | "group";
}
