// Payload shapes of the review service API. These mirror the server's JSON
// exactly; the UI never recomputes or mutates characterization fields.

export type Rating = 0 | 1 | 2 | 3;

export interface NestedProfile {
  "control-flow": GranularityCounts;
  temporal: GranularityCounts;
  resource: GranularityCounts;
  data: GranularityCounts;
  irrelevant: number;
}

export interface GranularityCounts {
  within_activities: number;
  between_activities: number;
}

export interface AssessmentPayload {
  unit_id: string;
  rating: Rating;
  notes: string;
  reviewer: string;
  assessed_at: string;
}

export interface ReviewItemPayload {
  unit_id: string;
  objective: string;
  practice_id: string;
  practice_name: string;
  sector: string;
  practice_description: string;
  criteria_kind: string;
  criteria_text: string;
  profile: NestedProfile | null;
  parse_status: string;
  explanation: string;
  assessments: AssessmentPayload[];
}

export interface QueuePage {
  total: number;
  offset: number;
  limit: number;
  items: ReviewItemPayload[];
}

export interface SummaryPayload {
  counts: {
    entirely_plausible: number;
    largely_plausible: number;
    somewhat_plausible: number;
    implausible: number;
  };
  total: number;
  average: string | null;
  average_raw: [number, number] | null;
  at_least_somewhat: number;
}

export interface PutAssessmentResponse {
  stored: boolean;
  assessment: AssessmentPayload;
}
