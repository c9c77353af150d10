/**
 * Keyboard mapping for the annotation queue: digits 0-9 pick categories 0-9,
 * shift+0-7 picks 10-17, and "i" marks the patch inconclusive.
 */

export type ShortcutAction =
  | { type: "label"; category: number }
  | { type: "inconclusive" };

export interface KeyInput {
  key: string;
  code: string;
  shiftKey: boolean;
  ctrlKey: boolean;
  altKey: boolean;
  metaKey: boolean;
}

interface EditableProbe {
  tagName?: string;
  isContentEditable?: boolean;
}

/** True when the event target is a text input, so shortcuts must stay inert. */
export function isEditableTarget(target: unknown): boolean {
  if (!target || typeof target !== "object") {
    return false;
  }
  const el = target as EditableProbe;
  return el.tagName === "INPUT" || el.tagName === "TEXTAREA" || el.isContentEditable === true;
}

export function interpretKey(input: KeyInput): ShortcutAction | null {
  if (input.ctrlKey || input.altKey || input.metaKey) {
    return null;
  }
  // Shifted digits produce symbols in e.key, so read the physical key code.
  if (input.code.startsWith("Digit")) {
    const digit = Number(input.code.slice("Digit".length));
    if (!Number.isInteger(digit) || digit > 9) {
      return null;
    }
    if (input.shiftKey) {
      return digit <= 7 ? { type: "label", category: 10 + digit } : null;
    }
    return { type: "label", category: digit };
  }
  if (!input.shiftKey && (input.key === "i" || input.key === "I")) {
    return { type: "inconclusive" };
  }
  return null;
}
