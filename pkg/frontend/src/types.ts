/** JSON shapes exchanged with the tuning service. */

export interface FeatureMeta {
  name: string;
  lower: number | null;
  upper: number | null;
  lower_open: boolean;
  upper_open: boolean;
  seasonal_only: boolean;
  integer: boolean;
}

export interface GAOverrides {
  population?: number;
  max_generations?: number;
  crossover_prob?: number;
  mutation_prob?: number;
  mutation_scale?: number;
  tournament_size?: number;
  tolerance?: number;
  k_fixed?: number;
  p_fixed?: number;
}

/** Body of POST /api/tune. */
export interface TuneRequest {
  period: number;
  length: number;
  count: number;
  seed: number;
  features: Record<string, number>;
  ga?: GAOverrides;
}

export interface TuneSubmitResponse {
  job_id: string;
}

export interface JobSnapshot {
  job_id: string;
  kind: string;
  status: "queued" | "running" | "done" | "failed";
  events: number;
  error: string | null;
  result_ready: boolean;
}

export interface ProgressEvent {
  seq: number;
  series: number;
  generation: number;
  best_fitness: number;
  best_feature_values: Record<string, number | null>;
  elapsed_ms: number;
}

export interface TuneSeriesResult {
  series: { id: string; periods: number[]; values: number[] };
  model: unknown;
  trace: number[];
  fitness: number;
  generations: number;
  feature_values: Record<string, number | null>;
}

export interface TuneResultBundle {
  target: { features: Record<string, number>; period: number; length: number };
  results: TuneSeriesResult[];
}
