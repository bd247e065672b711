// Shapes of the review API payloads. Field values are displayed verbatim;
// the client never recomputes a feature.

export interface ReviewItem {
  pair_id: string;
  family_id: string;
  pub_id: string;
  publication: {
    title: string;
    authors: string[];
    date: string;
    doi: string | null;
    mesh_headings: string[];
  };
  patent: {
    family_id: string;
    title: string;
    inventors: string[];
    applicants: string[];
    ipc_codes: string[];
    filing_date: string;
  };
  features: {
    n_common_names: number;
    n_common_refs: number | null;
    cosine: number | null;
    academic: boolean;
  };
  common_names: string[];
  common_dois: string[];
}

export type Classification = "valid_pair" | "no_valid_pair" | "not_determinable";

export const CLASSIFICATIONS: Classification[] = [
  "valid_pair",
  "no_valid_pair",
  "not_determinable",
];

export interface VerdictPayload {
  classification: Classification;
  reviewer_id: string;
}

export interface ReportRow {
  n_common_names: number;
  reviewed: number;
  valid_fraction: number;
  invalid_fraction: number;
  not_determinable_fraction: number;
}
