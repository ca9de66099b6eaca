// Thin typed client over the review service HTTP API. Every value the UI
// displays originates from one of these responses; nothing is synthesized
// client-side.

import type {
  AcceptBlockedBody,
  AcceptResponse,
  AgreementResponse,
  CorpusInfo,
  CorrectionRequest,
  CorrectionResponse,
  SentenceJson,
  SentenceSummary,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** The correction echoed a stale old_value; the sentence changed under us. */
export class ConflictError extends ApiError {
  constructor(message: string, public violations: ViolationList = []) {
    super(409, message);
  }
}

/** Transport failure: the service is unreachable, staged edits stay local. */
export class NetworkError extends Error {}

type ViolationList = AcceptBlockedBody["violations"];

async function readDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (typeof body.detail === "string") return body.detail;
    if (typeof body.error === "string") return body.error;
    return JSON.stringify(body);
  } catch {
    return response.statusText;
  }
}

export class ApiClient {
  constructor(
    public annotatorId: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private base = "",
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.base + path, init);
    } catch (err) {
      throw new NetworkError(String(err));
    }
    return response;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.request(path);
    if (!response.ok) throw new ApiError(response.status, await readDetail(response));
    return (await response.json()) as T;
  }

  async corpora(): Promise<CorpusInfo[]> {
    const body = await this.getJson<{ corpora: CorpusInfo[] }>("/corpora");
    return body.corpora;
  }

  async sentences(corpusId: string, status?: string): Promise<SentenceSummary[]> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    const body = await this.getJson<{ sentences: SentenceSummary[] }>(
      `/corpora/${encodeURIComponent(corpusId)}/sentences${query}`,
    );
    return body.sentences;
  }

  async sentence(sentId: string): Promise<SentenceJson> {
    return this.getJson<SentenceJson>(`/sentences/${encodeURIComponent(sentId)}`);
  }

  async postCorrection(
    sentId: string,
    correction: CorrectionRequest,
  ): Promise<CorrectionResponse> {
    const response = await this.request(
      `/sentences/${encodeURIComponent(sentId)}/corrections`,
      {
        method: "POST",
        headers: {
          "Content-Type": "application/json",
          "X-Annotator-Id": this.annotatorId,
        },
        body: JSON.stringify(correction),
      },
    );
    if (response.status === 409) throw new ConflictError(await readDetail(response));
    if (!response.ok) throw new ApiError(response.status, await readDetail(response));
    return (await response.json()) as CorrectionResponse;
  }

  async accept(sentId: string): Promise<AcceptResponse> {
    const response = await this.request(
      `/sentences/${encodeURIComponent(sentId)}/accept`,
      { method: "POST", headers: { "X-Annotator-Id": this.annotatorId } },
    );
    if (response.status === 409) {
      const body = (await response.json()) as AcceptBlockedBody;
      throw new ConflictError(body.error, body.violations);
    }
    if (!response.ok) throw new ApiError(response.status, await readDetail(response));
    return (await response.json()) as AcceptResponse;
  }

  async agreement(
    a: string,
    b: string,
    field: string,
    corpusId?: string,
  ): Promise<AgreementResponse> {
    const params = new URLSearchParams({ a, b, field });
    if (corpusId) params.set("corpus_id", corpusId);
    return this.getJson<AgreementResponse>(`/agreement?${params}`);
  }

  async report(corpusId: string, reference: "gold" | "reviewed"): Promise<Record<string, unknown>> {
    return this.getJson(`/reports/${encodeURIComponent(corpusId)}?reference=${reference}`);
  }
}
