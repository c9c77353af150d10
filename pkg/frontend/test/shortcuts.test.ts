import { describe, expect, it } from "vitest";

import { interpretKey, isEditableTarget, type KeyInput } from "../src/shortcuts.js";

function key(overrides: Partial<KeyInput>): KeyInput {
  return {
    key: "",
    code: "",
    shiftKey: false,
    ctrlKey: false,
    altKey: false,
    metaKey: false,
    ...overrides,
  };
}

describe("interpretKey", () => {
  it("maps plain digits to categories 0 through 9", () => {
    for (let d = 0; d <= 9; d++) {
      expect(interpretKey(key({ key: `${d}`, code: `Digit${d}` }))).toEqual({
        type: "label",
        category: d,
      });
    }
  });

  it("maps shifted digits 0 through 7 to categories 10 through 17", () => {
    for (let d = 0; d <= 7; d++) {
      // Shifted digit keys report symbols in `key`; only `code` is stable.
      expect(interpretKey(key({ key: "!", code: `Digit${d}`, shiftKey: true }))).toEqual({
        type: "label",
        category: 10 + d,
      });
    }
  });

  it("leaves shift+8 and shift+9 unmapped", () => {
    expect(interpretKey(key({ code: "Digit8", shiftKey: true }))).toBeNull();
    expect(interpretKey(key({ code: "Digit9", shiftKey: true }))).toBeNull();
  });

  it("maps i to the inconclusive action", () => {
    expect(interpretKey(key({ key: "i", code: "KeyI" }))).toEqual({ type: "inconclusive" });
    expect(interpretKey(key({ key: "I", code: "KeyI" }))).toEqual({ type: "inconclusive" });
    expect(interpretKey(key({ key: "I", code: "KeyI", shiftKey: true }))).toBeNull();
  });

  it("ignores chords with ctrl, alt, or meta", () => {
    expect(interpretKey(key({ code: "Digit3", ctrlKey: true }))).toBeNull();
    expect(interpretKey(key({ code: "Digit3", altKey: true }))).toBeNull();
    expect(interpretKey(key({ key: "i", code: "KeyI", metaKey: true }))).toBeNull();
  });

  it("ignores unrelated keys", () => {
    expect(interpretKey(key({ key: "a", code: "KeyA" }))).toBeNull();
    expect(interpretKey(key({ key: "Enter", code: "Enter" }))).toBeNull();
    expect(interpretKey(key({ key: "5", code: "Numpad5" }))).toBeNull();
  });
});

describe("isEditableTarget", () => {
  it("guards text inputs so typing never fires shortcuts", () => {
    expect(isEditableTarget({ tagName: "INPUT" })).toBe(true);
    expect(isEditableTarget({ tagName: "TEXTAREA" })).toBe(true);
    expect(isEditableTarget({ tagName: "DIV", isContentEditable: true })).toBe(true);
  });

  it("lets ordinary targets through", () => {
    expect(isEditableTarget({ tagName: "DIV", isContentEditable: false })).toBe(false);
    expect(isEditableTarget({ tagName: "BUTTON" })).toBe(false);
    expect(isEditableTarget(null)).toBe(false);
    expect(isEditableTarget(undefined)).toBe(false);
  });
});
