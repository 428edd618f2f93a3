import type {
  FeatureMeta,
  JobSnapshot,
  TuneRequest,
  TuneSubmitResponse,
} from "./types.js";

/** Thin typed client for the tuning service. */
export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async featureNames(): Promise<FeatureMeta[]> {
    const res = await fetch(this.url("/api/feature-names"));
    if (!res.ok) throw new Error(`feature-names failed: ${res.status}`);
    const body = (await res.json()) as { features: FeatureMeta[] };
    return body.features;
  }

  async submitTune(payload: TuneRequest): Promise<TuneSubmitResponse> {
    const res = await fetch(this.url("/api/tune"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (res.status === 400) {
      const detail = ((await res.json()) as { detail?: string }).detail;
      throw new ValidationError(detail ?? "invalid request");
    }
    if (!res.ok && res.status !== 202) {
      throw new Error(`tune submit failed: ${res.status}`);
    }
    return (await res.json()) as TuneSubmitResponse;
  }

  async jobSnapshot(jobId: string): Promise<JobSnapshot> {
    const res = await fetch(this.url(`/api/jobs/${jobId}`));
    if (!res.ok) throw new Error(`job lookup failed: ${res.status}`);
    return (await res.json()) as JobSnapshot;
  }

  /**
   * Raw result bytes. Downloads must pass these through untouched so the
   * saved file is byte-identical to the service response.
   */
  async resultBytes(jobId: string): Promise<Uint8Array> {
    const res = await fetch(this.url(`/api/jobs/${jobId}/result`));
    if (res.status === 409) throw new ResultPendingError();
    if (!res.ok) throw new Error(`result fetch failed: ${res.status}`);
    return new Uint8Array(await res.arrayBuffer());
  }

  eventsUrl(jobId: string): string {
    return this.url(`/api/jobs/${jobId}/events`);
  }
}

export class ValidationError extends Error {}

export class ResultPendingError extends Error {
  constructor() {
    super("result not ready");
  }
}
