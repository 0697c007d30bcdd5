import { describe, expect, it } from "vitest";

import {
  averageText,
  badgeText,
  hasNextPage,
  hasPrevPage,
  latestAssessment,
  nextUnreviewed,
  pageLabel,
  profileRows,
  ratingForKey,
  withAssessment,
} from "../src/model.js";
import type {
  AssessmentPayload,
  NestedProfile,
  Rating,
  ReviewItemPayload,
  SummaryPayload,
} from "../src/types.js";

function item(unitId: string, assessments: AssessmentPayload[] = []): ReviewItemPayload {
  return {
    unit_id: unitId,
    objective: "mitigation",
    practice_id: "p",
    practice_name: "P",
    sector: "Energy",
    practice_description: "",
    criteria_kind: "sc",
    criteria_text: "text",
    profile: null,
    parse_status: "clean",
    explanation: "",
    assessments,
  };
}

function assessment(unitId: string, reviewer: string, rating: Rating): AssessmentPayload {
  return { unit_id: unitId, reviewer, rating, notes: "", assessed_at: "t" };
}

describe("ratingForKey", () => {
  it("maps the digit keys to their rating values", () => {
    expect(ratingForKey("0")).toBe(0);
    expect(ratingForKey("1")).toBe(1);
    expect(ratingForKey("2")).toBe(2);
    expect(ratingForKey("3")).toBe(3);
  });

  it("ignores everything else", () => {
    for (const key of ["4", "9", "a", "Enter", "Escape", " "]) {
      expect(ratingForKey(key)).toBeNull();
    }
  });
});

describe("profileRows", () => {
  it("lists the four dimensions in fixed order with both granularities", () => {
    const profile: NestedProfile = {
      "control-flow": { within_activities: 1, between_activities: 2 },
      temporal: { within_activities: 3, between_activities: 4 },
      resource: { within_activities: 5, between_activities: 6 },
      data: { within_activities: 7, between_activities: 8 },
      irrelevant: 9,
    };
    expect(profileRows(profile)).toEqual([
      { dimension: "Control-flow", within: 1, between: 2 },
      { dimension: "Temporal", within: 3, between: 4 },
      { dimension: "Resource", within: 5, between: 6 },
      { dimension: "Data", within: 7, between: 8 },
    ]);
  });
});

describe("assessment bookkeeping", () => {
  it("finds the current reviewer's assessment only", () => {
    const it1 = item("u", [assessment("u", "alice", 3), assessment("u", "bob", 0)]);
    expect(latestAssessment(it1, "alice")?.rating).toBe(3);
    expect(latestAssessment(it1, "carol")).toBeNull();
  });

  it("renders badges from the reviewer's own rating", () => {
    const it1 = item("u", [assessment("u", "alice", 2)]);
    expect(badgeText(it1, "alice")).toBe("Largely plausible");
    expect(badgeText(it1, "bob")).toBe("unreviewed");
  });

  it("withAssessment replaces in place without touching other reviewers", () => {
    const before = item("u", [assessment("u", "alice", 1), assessment("u", "bob", 2)]);
    const after = withAssessment(before, assessment("u", "alice", 3));
    expect(latestAssessment(after, "alice")?.rating).toBe(3);
    expect(latestAssessment(after, "bob")?.rating).toBe(2);
    // original untouched, so it can serve as the rollback snapshot
    expect(latestAssessment(before, "alice")?.rating).toBe(1);
  });
});

describe("nextUnreviewed", () => {
  it("advances to the following unreviewed item, wrapping around", () => {
    const items = [
      item("a", [assessment("a", "r", 3)]),
      item("b"),
      item("c", [assessment("c", "r", 0)]),
      item("d"),
    ];
    expect(nextUnreviewed(items, 1, "r")).toBe(3);
    expect(nextUnreviewed(items, 3, "r")).toBe(1);
  });

  it("returns null when everything is reviewed", () => {
    const items = [item("a", [assessment("a", "r", 1)])];
    expect(nextUnreviewed(items, 0, "r")).toBeNull();
  });
});

describe("summary display", () => {
  const base: SummaryPayload = {
    counts: {
      entirely_plausible: 0,
      largely_plausible: 0,
      somewhat_plausible: 0,
      implausible: 0,
    },
    total: 0,
    average: null,
    average_raw: null,
    at_least_somewhat: 0,
  };

  it("shows the placeholder when no assessments exist", () => {
    expect(averageText(base)).toBe("—");
  });

  it("passes the server-formatted average through unchanged", () => {
    expect(averageText({ ...base, total: 357, average: "2.74" })).toBe("2.74");
    expect(averageText({ ...base, total: 4, average: "0.00" })).toBe("0.00");
  });
});

describe("pagination", () => {
  it("labels pages and the empty queue", () => {
    expect(pageLabel(0, 0, 0)).toBe("no items");
    expect(pageLabel(357, 0, 50)).toBe("items 1–50 of 357");
    expect(pageLabel(357, 350, 7)).toBe("items 351–357 of 357");
  });

  it("knows when prev/next pages exist", () => {
    expect(hasPrevPage(0)).toBe(false);
    expect(hasPrevPage(50)).toBe(true);
    expect(hasNextPage(357, 300, 50)).toBe(true);
    expect(hasNextPage(357, 350, 50)).toBe(false);
    expect(hasNextPage(21, 0, 50)).toBe(false);
  });
});
