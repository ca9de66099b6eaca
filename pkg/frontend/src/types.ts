// JSON shapes exactly as the review service returns them
// (see tests/fixtures/*.json, captured from the live API).

export interface TokenJson {
  id: number;
  form: string;
  lang: string;
  lemma: string;
  upos: string;
  head_id: number | null;
  head_form: string | null;
  deprel: string | null;
}

export interface ViolationJson {
  code: string;
  sent_id: string;
  token_id: number | null;
  message: string;
  hard: boolean;
}

export interface HistoryEntry {
  token_id: number | null;
  field: string;
  old_value: unknown;
  new_value: unknown;
  annotator_id: string;
  timestamp: string;
}

export interface SentenceJson {
  corpus_id: string;
  sent_id: string;
  text: string;
  pair: string;
  spec: boolean;
  speaker: string | null;
  utterance_id: string | null;
  status: "PENDING" | "IN_REVIEW" | "ACCEPTED";
  reviewed_by: string[];
  tokens: TokenJson[];
  violations: ViolationJson[];
  advisories: string[];
  children_map: Record<string, number[]> | null;
  history: HistoryEntry[];
}

export interface CorrectionResponse {
  sentence: SentenceJson;
  violations: ViolationJson[];
}

export interface AcceptResponse {
  sent_id: string;
  status: string;
  reviewed_by: string[];
}

export interface AcceptBlockedBody {
  error: string;
  violations: ViolationJson[];
}

export interface CorpusInfo {
  id: string;
  n_sentences: number;
  status_counts: Record<string, number>;
  has_gold: boolean;
}

export interface SentenceSummary {
  sent_id: string;
  text: string;
  status: string;
  n_violations: number;
  n_hard: number;
}

export interface AgreementResponse {
  a: string;
  b: string;
  field: string;
  n_sentences: number;
  kappa: number;
}

export type EditableField = "UPOS" | "HEAD_ID" | "DEPREL" | "LEMMA" | "SPEC";

export interface CorrectionRequest {
  token_id: number | null;
  field: EditableField;
  old_value: unknown;
  new_value: unknown;
}
