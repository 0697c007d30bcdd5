// Pure view logic: everything here is DOM-free so it can be unit tested.

import type {
  AssessmentPayload,
  NestedProfile,
  Rating,
  ReviewItemPayload,
  SummaryPayload,
} from "./types.js";

export const RATING_NAMES: Record<Rating, string> = {
  0: "Implausible",
  1: "Somewhat plausible",
  2: "Largely plausible",
  3: "Entirely plausible",
};

// Keyboard mapping: the digit is the rating value itself.
export function ratingForKey(key: string): Rating | null {
  if (key === "0" || key === "1" || key === "2" || key === "3") {
    return Number(key) as Rating;
  }
  return null;
}

const PROFILE_ROWS: Array<[string, keyof NestedProfile]> = [
  ["Control-flow", "control-flow"],
  ["Temporal", "temporal"],
  ["Resource", "resource"],
  ["Data", "data"],
];

export interface ProfileRow {
  dimension: string;
  within: number;
  between: number;
}

export function profileRows(profile: NestedProfile): ProfileRow[] {
  return PROFILE_ROWS.map(([label, key]) => {
    const counts = profile[key] as { within_activities: number; between_activities: number };
    return {
      dimension: label,
      within: counts.within_activities,
      between: counts.between_activities,
    };
  });
}

export function latestAssessment(
  item: ReviewItemPayload,
  reviewer: string,
): AssessmentPayload | null {
  return item.assessments.find((a) => a.reviewer === reviewer) ?? null;
}

export function badgeText(item: ReviewItemPayload, reviewer: string): string {
  const a = latestAssessment(item, reviewer);
  return a === null ? "unreviewed" : RATING_NAMES[a.rating];
}

// Replace or insert this reviewer's assessment; returns a new item object so
// the caller can keep the previous one around for rollback.
export function withAssessment(
  item: ReviewItemPayload,
  assessment: AssessmentPayload,
): ReviewItemPayload {
  const others = item.assessments.filter((a) => a.reviewer !== assessment.reviewer);
  return { ...item, assessments: [...others, assessment] };
}

export function nextUnreviewed(
  items: ReviewItemPayload[],
  fromIndex: number,
  reviewer: string,
): number | null {
  for (let step = 1; step <= items.length; step++) {
    const i = (fromIndex + step) % items.length;
    if (latestAssessment(items[i], reviewer) === null) return i;
  }
  return null;
}

export function averageText(summary: SummaryPayload): string {
  // The server computes the average; the client only substitutes the
  // placeholder glyph when there is nothing to average yet.
  return summary.average ?? "—";
}

export function pageLabel(total: number, offset: number, count: number): string {
  if (total === 0) return "no items";
  const first = offset + 1;
  const last = offset + count;
  return `items ${first}–${last} of ${total}`;
}

export function hasPrevPage(offset: number): boolean {
  return offset > 0;
}

export function hasNextPage(total: number, offset: number, limit: number): boolean {
  return offset + limit < total;
}
