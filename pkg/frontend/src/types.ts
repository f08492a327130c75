/** Wire types for the qgen HTTP API (snake_case mirrors the service). */

export interface ColumnSummary {
  name: string;
  kind: string;
}

export interface CatalogEntry {
  dataset_id?: string;
  name: string;
  row_count?: number;
  columns?: ColumnSummary[];
  warning?: string;
}

export interface CatalogResponse {
  datasets: CatalogEntry[];
}

export interface UploadResponse {
  dataset_id: string;
  content_hash: string;
  profile: {
    name: string;
    row_count: number;
    columns: Array<Record<string, unknown>>;
  };
}

export interface SessionCreated {
  session_id: string;
  question_count: number;
  status: string;
}

export interface QuestionPayload {
  rank: number;
  id: string;
  text: string;
  score: number;
  columns: string[];
  operators: Record<string, string>;
  slot_values: string[];
  weight?: number;
}

export interface QuestionsResponse {
  session_id: string;
  iteration: number;
  question_count: number;
  questions: QuestionPayload[];
}

export interface SelectResponse {
  session_id: string;
  iteration: number;
  probabilities: Record<string, number>;
  questions: QuestionPayload[];
}

export interface SearchResponse {
  session_id: string;
  query: string;
  matches: QuestionPayload[];
}

export interface ResumeResponse {
  session_id: string;
  dataset_id: string;
  question_count: number;
  iteration: number;
  status: string;
}

export interface ErrorBody {
  error: string;
  detail?: string;
}
