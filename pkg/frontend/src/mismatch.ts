import type { MismatchRow, PatchRecord, TaxonomyEntry } from "./types.js";

/**
 * View model for the auto-vs-manual mismatch screen. Counts come straight
 * from /api/mismatches (already sorted by count descending); the UI only
 * decorates them with category descriptions and, where possible, drill-down
 * patches from records seen earlier in the session. The service has no
 * patch-listing endpoint, so drill-down is best effort by design.
 */

export interface MismatchEntry {
  auto: number;
  manual: number;
  count: number;
  autoDescription: string;
  manualDescription: string;
  /** Session-cached records whose (auto, manual) labels form this pair. */
  patches: PatchRecord[];
}

export interface MismatchView {
  entries: MismatchEntry[];
  totalDisagreements: number;
}

export function buildMismatchView(
  rows: MismatchRow[],
  taxonomy: TaxonomyEntry[],
  seen: Iterable<PatchRecord> = [],
): MismatchView {
  const descriptions = new Map(taxonomy.map((t) => [t.id, t.description]));
  const byPair = new Map<string, PatchRecord[]>();
  for (const record of seen) {
    if (record.category_auto === null || record.category_manual === null) {
      continue;
    }
    const key = `${record.category_auto}:${record.category_manual}`;
    const bucket = byPair.get(key);
    if (bucket) {
      bucket.push(record);
    } else {
      byPair.set(key, [record]);
    }
  }
  const entries = rows.map((row) => ({
    auto: row.auto,
    manual: row.manual,
    count: row.count,
    autoDescription: descriptions.get(row.auto) ?? `category ${row.auto}`,
    manualDescription: descriptions.get(row.manual) ?? `category ${row.manual}`,
    patches: byPair.get(`${row.auto}:${row.manual}`) ?? [],
  }));
  return {
    entries,
    totalDisagreements: rows.reduce((sum, row) => sum + row.count, 0),
  };
}
