/**
 * Thin client for the geoformal reward service.
 *
 * Batches (prediction, reference) pairs from a policy's rollouts, posts
 * them to the service, and returns scalar rewards in rollout order. The
 * client does no local parsing: the service is the single source of truth
 * for the formal language, which keeps the trainer and the verifier from
 * drifting apart.
 */

import { readFile } from "node:fs/promises";

export type Domain = "plane" | "solid";

export interface ClientConfig {
  /** Service base URL; defaults to GEOFORMAL_ENDPOINT or localhost:8321. */
  endpoint?: string;
  /** Per-request timeout in seconds; must be positive. */
  timeoutSeconds?: number;
  /** Extra attempts after a transient failure; must be >= 0. */
  retries?: number;
  /** Domain used for pairs that do not name one. */
  defaultDomain?: Domain;
}

export interface RewardPair {
  prediction: string;
  reference: string;
  domain?: Domain;
}

export interface CorpusRecord {
  id: string;
  prediction: string;
  reference: string;
  domain: Domain;
}

interface RewardResponseItem {
  id: string;
  total: number;
  r_fmt: number;
  r_geo: number;
  per_category_precision: Record<string, number>;
}

interface RewardResponse {
  items: RewardResponseItem[];
  config_echo: Record<string, unknown>;
  service_version: string;
}

/** Service major versions this client speaks. */
const SUPPORTED_MAJOR_VERSIONS = new Set(["0"]);

const DEFAULT_ENDPOINT = "http://127.0.0.1:8321";

export class GeoformalClientError extends Error {
  constructor(message: string, readonly cause?: unknown) {
    super(message);
    this.name = "GeoformalClientError";
  }
}

export class GeoformalClient {
  private readonly endpoint: string;
  private readonly timeoutMs: number;
  private readonly retries: number;
  private readonly defaultDomain: Domain;
  private versionChecked = false;

  constructor(config: ClientConfig = {}) {
    const timeoutSeconds = config.timeoutSeconds ?? 30;
    const retries = config.retries ?? 2;
    if (!(timeoutSeconds > 0)) {
      throw new GeoformalClientError("timeoutSeconds must be positive");
    }
    if (!(Number.isInteger(retries) && retries >= 0)) {
      throw new GeoformalClientError("retries must be a nonnegative integer");
    }
    this.endpoint = (
      config.endpoint ??
      process.env.GEOFORMAL_ENDPOINT ??
      DEFAULT_ENDPOINT
    ).replace(/\/+$/, "");
    this.timeoutMs = timeoutSeconds * 1000;
    this.retries = retries;
    this.defaultDomain = config.defaultDomain ?? "plane";
  }

  /** GET /v1/health; also the transport for the version handshake. */
  async health(): Promise<{ status: string; version: string; config_hash: string }> {
    const response = await this.request("GET", "/v1/health");
    return (await response.json()) as { status: string; version: string; config_hash: string };
  }

  /**
   * Score a batch of rollout pairs. Returns one total per pair, in input
   * order. An empty batch resolves without touching the network.
   */
  async rewardBatch(pairs: RewardPair[]): Promise<number[]> {
    if (pairs.length === 0) {
      return [];
    }
    await this.ensureCompatibleVersion();
    const items = pairs.map((pair, index) => ({
      id: String(index),
      prediction: pair.prediction,
      reference: pair.reference,
      domain: pair.domain ?? this.defaultDomain,
    }));
    const response = await this.request("POST", "/v1/reward", { items });
    const body = (await response.json()) as RewardResponse;
    if (!Array.isArray(body.items) || body.items.length !== items.length) {
      throw new GeoformalClientError(
        `service answered ${body.items?.length ?? 0} items for ${items.length} pairs`,
      );
    }
    const byId = new Map(body.items.map((item) => [item.id, item.total]));
    return items.map((item) => {
      const total = byId.get(item.id);
      if (total === undefined) {
        throw new GeoformalClientError(`service response is missing item ${item.id}`);
      }
      return total;
    });
  }

  /**
   * Score a JSONL corpus file through POST /v1/score. Records are
   * validated locally before any request is made. An optional domain
   * filter mirrors the scoring tool's --domain flag; the file must be
   * single-domain after filtering.
   */
  async scoreFile(path: string, domain?: Domain): Promise<Record<string, unknown>> {
    const raw = await readFile(path, "utf-8");
    const records: CorpusRecord[] = [];
    const seen = new Set<string>();
    raw.split("\n").forEach((line, index) => {
      if (!line.trim()) {
        return;
      }
      let data: unknown;
      try {
        data = JSON.parse(line);
      } catch (error) {
        throw new GeoformalClientError(`${path}:${index + 1}: invalid JSON`, error);
      }
      const record = validateRecord(data, `${path}:${index + 1}`);
      if (seen.has(record.id)) {
        throw new GeoformalClientError(`${path}:${index + 1}: duplicate id ${record.id}`);
      }
      seen.add(record.id);
      records.push(record);
    });
    const kept = domain ? records.filter((record) => record.domain === domain) : records;
    if (kept.length === 0) {
      throw new GeoformalClientError(`${path}: no records to score`);
    }
    return this.scoreRecords(kept);
  }

  /** Score already-validated records through POST /v1/score. */
  async scoreRecords(records: CorpusRecord[]): Promise<Record<string, unknown>> {
    await this.ensureCompatibleVersion();
    const response = await this.request("POST", "/v1/score", { items: records });
    return (await response.json()) as Record<string, unknown>;
  }

  private async ensureCompatibleVersion(): Promise<void> {
    if (this.versionChecked) {
      return;
    }
    const body = await this.health();
    const major = (body.version ?? "").split(".")[0];
    if (!SUPPORTED_MAJOR_VERSIONS.has(major)) {
      throw new GeoformalClientError(
        `service version ${body.version} is not supported by this client`,
      );
    }
    this.versionChecked = true;
  }

  private async request(method: string, path: string, body?: unknown): Promise<Response> {
    const url = this.endpoint + path;
    let lastFailure: unknown;
    for (let attempt = 0; attempt <= this.retries; attempt++) {
      if (attempt > 0) {
        await sleep(Math.min(200 * 2 ** (attempt - 1), 2000));
      }
      let response: Response;
      try {
        response = await fetch(url, {
          method,
          headers: body === undefined ? undefined : { "content-type": "application/json" },
          body: body === undefined ? undefined : JSON.stringify(body),
          signal: AbortSignal.timeout(this.timeoutMs),
        });
      } catch (error) {
        lastFailure = error; // connection refused, reset, timeout: retryable
        continue;
      }
      if (response.ok) {
        return response;
      }
      if (response.status >= 500) {
        lastFailure = new GeoformalClientError(`${method} ${path} -> ${response.status}`);
        continue;
      }
      throw new GeoformalClientError(
        `${method} ${path} -> ${response.status}: ${await describeError(response)}`,
      );
    }
    throw new GeoformalClientError(
      `${method} ${path} failed after ${this.retries + 1} attempts`,
      lastFailure,
    );
  }
}

function validateRecord(data: unknown, where: string): CorpusRecord {
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new GeoformalClientError(`${where}: record must be a JSON object`);
  }
  const record = data as Record<string, unknown>;
  for (const field of ["id", "prediction", "reference", "domain"]) {
    if (typeof record[field] !== "string") {
      throw new GeoformalClientError(`${where}: field '${field}' must be a string`);
    }
  }
  if (record.domain !== "plane" && record.domain !== "solid") {
    throw new GeoformalClientError(`${where}: domain must be 'plane' or 'solid'`);
  }
  return {
    id: record.id as string,
    prediction: record.prediction as string,
    reference: record.reference as string,
    domain: record.domain as Domain,
  };
}

async function describeError(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    return [body.error, body.detail].filter(Boolean).join(": ") || response.statusText;
  } catch {
    return response.statusText;
  }
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
