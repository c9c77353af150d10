import type { PatchRecord } from "../src/types.js";

/** Normal-format change hunk shaped like the service's Java exemplar:
 *  one line replaced by two, so one removed and two added rows. */
export const CHANGE_HUNK_FIXTURE =
  "312c312,313\n" +
  "<             throw new ParseException(msg, pp.getErrorIndex());\n" +
  "---\n" +
  ">             String errorMessage = msg;\n" +
  ">             throw new ParseException(errorMessage, pp.getErrorIndex());\n";

export function makeRecord(id: string, overrides: Partial<PatchRecord> = {}): PatchRecord {
  return {
    patch_id: id,
    project: "commons-net",
    llm: "mistral",
    diff_raw: CHANGE_HUNK_FIXTURE,
    summary_raw: null,
    summary_clean: null,
    category_manual: null,
    category_auto: null,
    compiled: null,
    passed: null,
    noop: null,
    ...overrides,
  };
}
