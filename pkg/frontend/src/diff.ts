/**
 * View-model renderer for POSIX normal-format diffs.
 *
 * The service is the authority on diff semantics; the UI re-parses only the
 * two things it styles, hunk headers and the "<" / ">" line markers. Any
 * line that fits neither is shown verbatim as a warning row, so a mangled
 * diff can always still be read and labeled.
 */

export type DiffRowKind = "header" | "removed" | "added" | "separator" | "warning";

export interface DiffRow {
  kind: DiffRowKind;
  /** Line content with the marker stripped; headers and warnings keep the full line. */
  text: string;
  /** 1-based line number in the raw diff text. */
  line: number;
}

export interface DiffView {
  rows: DiffRow[];
  /** Original text, byte for byte, for the copy-source view. */
  raw: string;
  empty: boolean;
  warnings: number;
}

// Range is "N" or "N,M"; the letter is the edit kind (append/change/delete).
const HEADER = /^\d+(,\d+)?[acd]\d+(,\d+)?$/;

export function classifyLine(line: string): DiffRowKind {
  if (HEADER.test(line)) {
    return "header";
  }
  if (line === "---") {
    return "separator";
  }
  // "< " and "> " prefix content lines; a bare marker is an empty source line.
  if (line.startsWith("< ") || line === "<") {
    return "removed";
  }
  if (line.startsWith("> ") || line === ">") {
    return "added";
  }
  return "warning";
}

export function renderDiff(raw: string): DiffView {
  if (raw === "") {
    return { rows: [], raw, empty: true, warnings: 0 };
  }
  const lines = raw.split("\n");
  if (lines[lines.length - 1] === "") {
    lines.pop();
  }
  const rows: DiffRow[] = [];
  let warnings = 0;
  lines.forEach((line, i) => {
    const kind = classifyLine(line);
    if (kind === "warning") {
      warnings += 1;
    }
    const text = kind === "removed" || kind === "added" ? line.slice(2) : line;
    rows.push({ kind, text, line: i + 1 });
  });
  return { rows, raw, empty: false, warnings };
}

export function countRows(view: DiffView, kind: DiffRowKind): number {
  return view.rows.filter((row) => row.kind === kind).length;
}
