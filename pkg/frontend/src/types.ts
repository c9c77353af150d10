/**
 * Payload shapes for the patchtriage /api endpoints.
 *
 * These mirror the service's JSON exactly; the UI never invents fields and
 * never computes categories on its own.
 */

export interface TaxonomyEntry {
  id: number;
  description: string;
  noop: boolean;
}

export interface PatchRecord {
  patch_id: string;
  project: string;
  llm: string;
  diff_raw: string;
  summary_raw: string | null;
  summary_clean: string | null;
  category_manual: number | null;
  category_auto: number | null;
  compiled: boolean | null;
  passed: boolean | null;
  noop: boolean | null;
}

export interface CategoryStatsRow {
  id: number;
  total: number;
  compiled: number;
  passed: number;
  noop: number;
  compile_rate: number;
  pass_rate: number;
  noop_rate: number;
}

export interface StatsReport {
  pass_rate_basis: string;
  excluded: number;
  categories: CategoryStatsRow[];
}

export interface MismatchRow {
  auto: number;
  manual: number;
  count: number;
}

export interface PerCategoryMetric {
  id: number;
  size: number;
  accuracy: number;
}

export interface TrainReport {
  accuracy: number | null;
  accuracy_mode: string;
  nmi: number | null;
  n: number;
  per_category: PerCategoryMetric[];
  model_version: string;
}

export interface Prediction {
  category: number;
  description: string;
  distances: number[];
  summary_clean: string;
}
