import { describe, expect, it } from "vitest";

import { buildMismatchView } from "../src/mismatch.js";
import type { MismatchRow } from "../src/types.js";
import { FAKE_TAXONOMY } from "./fakeServer.js";
import { makeRecord } from "./fixtures.js";

const ROWS: MismatchRow[] = [
  { auto: 3, manual: 5, count: 2 },
  { auto: 0, manual: 1, count: 2 },
  { auto: 9, manual: 4, count: 1 },
];

describe("buildMismatchView", () => {
  it("keeps the endpoint's counts and order untouched", () => {
    const view = buildMismatchView(ROWS, FAKE_TAXONOMY);
    expect(view.entries.map((e) => ({ auto: e.auto, manual: e.manual, count: e.count }))).toEqual(
      ROWS,
    );
    expect(view.totalDisagreements).toBe(5);
  });

  it("decorates pairs with taxonomy descriptions", () => {
    const view = buildMismatchView(ROWS, FAKE_TAXONOMY);
    expect(view.entries[0].autoDescription).toBe("edit kind 3");
    expect(view.entries[0].manualDescription).toBe("edit kind 5");
  });

  it("falls back to a generic description for unknown ids", () => {
    const view = buildMismatchView([{ auto: 99, manual: 1, count: 1 }], FAKE_TAXONOMY);
    expect(view.entries[0].autoDescription).toBe("category 99");
  });

  it("attaches session-seen records to their (auto, manual) pair", () => {
    const seen = [
      makeRecord("a", { category_auto: 3, category_manual: 5 }),
      makeRecord("b", { category_auto: 3, category_manual: 5 }),
      makeRecord("c", { category_auto: 0, category_manual: 1 }),
      makeRecord("d", { category_auto: 3, category_manual: 3 }),
      makeRecord("e", { category_auto: 3 }),
    ];
    const view = buildMismatchView(ROWS, FAKE_TAXONOMY, seen);
    expect(view.entries[0].patches.map((p) => p.patch_id)).toEqual(["a", "b"]);
    expect(view.entries[1].patches.map((p) => p.patch_id)).toEqual(["c"]);
    expect(view.entries[2].patches).toEqual([]);
  });

  it("renders an empty matrix as an empty view", () => {
    const view = buildMismatchView([], FAKE_TAXONOMY);
    expect(view.entries).toEqual([]);
    expect(view.totalDisagreements).toBe(0);
  });
});
