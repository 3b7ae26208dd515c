/**
 * Wire types for the fault-isolation service.
 *
 * These mirror the service's JSON bodies field for field.  The console
 * never computes degrees of its own: a `DegreeJson` is displayed by its
 * level name, with the exact rational kept only for a tooltip.
 */

export interface DegreeJson {
  name: string;
  numerator: number;
  denominator: number;
}

export interface ExpectedPointJson {
  component: string;
  param: string;
  state: string;
  kind: "present" | "absent";
  degree: DegreeJson;
}

export type Classification =
  | "identified_fault"
  | "upstream_signature"
  | "signature";

export interface BoardRowJson {
  label: string;
  classification: Classification;
  status: "active" | "discarded";
  consistency: DegreeJson;
  abduction: DegreeJson;
  abductive: boolean;
  dominated: string[];
  expected: ExpectedPointJson[];
  killed_by: string | null;
  verdict: string | null;
}

export interface ProbeJson {
  component: string;
  param: string;
  state: string;
  score: number;
  strength: DegreeJson;
}

export interface BoardJson {
  session_id: string;
  revision: number;
  rows: BoardRowJson[];
  probes: ProbeJson[];
  /** GET /board?revision=N only: false when N is still current. */
  changed?: boolean;
  /** POST /whatif only: marks a board that was never recorded. */
  hypothetical?: boolean;
}

export interface ProbesJson {
  session_id: string;
  revision: number;
  probes: ProbeJson[];
}

export interface ParamJson {
  name: string;
  direction: "input" | "output";
  kind: string;
  states: string[];
  observable: boolean;
}

export interface ComponentJson {
  name: string;
  config_states: string[];
  faults: string[];
  params: ParamJson[];
}

export interface EndpointJson {
  component: string;
  param: string;
}

export interface LinkJson {
  source: EndpointJson;
  target: EndpointJson;
}

export interface TopologyJson {
  components: ComponentJson[];
  links: LinkJson[];
}

export interface JournalJson {
  session_id: string;
  revision: number;
  lines: string[];
}

export interface SessionOpened {
  session_id: string;
  revision: number;
}

export interface ObservationForm {
  component: string;
  output: string;
  state: string;
  polarity: "present" | "absent";
  level: string;
}

export interface VerdictForm {
  label: string;
  reason: string;
}

export interface ErrorSpan {
  file: string;
  line: number;
  column: number;
}

export interface ErrorDetail {
  message: string;
  span?: ErrorSpan;
}
