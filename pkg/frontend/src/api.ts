/** Thin client for the skeleton service. */

import { ClassifyResponse, LogHandle, SkeletonResponse } from "./types.js";
import { SkeletonQuery } from "./state.js";

export function skeletonUrl(base: string, logId: string, query: SkeletonQuery): string {
  const params = new URLSearchParams();
  if (query.required.length) params.set("required", query.required.join(","));
  if (query.forbidden.length) params.set("forbidden", query.forbidden.join(","));
  if (query.activities !== null) params.set("activities", query.activities.join(","));
  if (query.relations.length) params.set("relations", query.relations.join(","));
  if (query.hyper) params.set("hyper", "true");
  const suffix = params.toString();
  return `${base}/logs/${encodeURIComponent(logId)}/skeleton${suffix ? "?" + suffix : ""}`;
}

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status code
    }
    throw new Error(detail);
  }
  return response;
}

export class ApiClient {
  constructor(
    private base: string = "",
    private fetcher: typeof fetch = fetch.bind(globalThis),
  ) {}

  async listLogs(): Promise<LogHandle[]> {
    const response = await expectOk(await this.fetcher(`${this.base}/logs`));
    return (await response.json()).logs;
  }

  async uploadLog(name: string, format: string, content: string): Promise<LogHandle> {
    const params = new URLSearchParams({ format, name });
    const response = await expectOk(
      await this.fetcher(`${this.base}/logs?${params}`, {
        method: "POST",
        headers: { "Content-Type": "text/plain;charset=UTF-8" },
        body: content,
      }),
    );
    return response.json();
  }

  async fetchSkeleton(logId: string, query: SkeletonQuery): Promise<SkeletonResponse> {
    const response = await expectOk(await this.fetcher(skeletonUrl(this.base, logId, query)));
    return response.json();
  }

  async classify(logId: string, lines: string[]): Promise<ClassifyResponse> {
    const response = await expectOk(
      await this.fetcher(`${this.base}/logs/${encodeURIComponent(logId)}/classify`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ traces: lines }),
      }),
    );
    return response.json();
  }
}
