/**
 * API base URL resolution. Precedence: window.PATCHTRIAGE_API_BASE (set by
 * the page that serves the bundle), then a saved per-browser override, then
 * same-origin "". Build-time deployments bake a default into index.html.
 */

const STORAGE_KEY = "patchtriage.apiBase";

interface GlobalsProbe {
  PATCHTRIAGE_API_BASE?: unknown;
  localStorage?: { getItem(k: string): string | null; setItem(k: string, v: string): void };
}

function probe(globals?: unknown): GlobalsProbe {
  if (globals && typeof globals === "object") {
    return globals as GlobalsProbe;
  }
  return typeof window === "undefined" ? {} : (window as GlobalsProbe);
}

export function resolveApiBase(globals?: unknown): string {
  const g = probe(globals);
  if (typeof g.PATCHTRIAGE_API_BASE === "string") {
    return g.PATCHTRIAGE_API_BASE;
  }
  try {
    const saved = g.localStorage?.getItem(STORAGE_KEY);
    if (typeof saved === "string") {
      return saved;
    }
  } catch {
    // Storage can be unavailable (private mode); fall through to the default.
  }
  return "";
}

export function saveApiBase(base: string, globals?: unknown): void {
  const g = probe(globals);
  try {
    g.localStorage?.setItem(STORAGE_KEY, base);
  } catch {
    // Best effort; the in-page value still applies for this session.
  }
}
