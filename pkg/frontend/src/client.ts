/**
 * Typed client for the session service.
 *
 * One instance tracks one session: the id and the last revision the
 * service reported.  Mutations carry the revision the operator's form
 * was built against; a form that has fallen behind the tracked revision
 * is rejected locally, before any network traffic, so the caller can
 * re-fetch and re-render instead of submitting against a board the
 * operator never saw.
 */

import type {
  BoardJson,
  ErrorDetail,
  JournalJson,
  ObservationForm,
  ProbesJson,
  SessionOpened,
  TopologyJson,
  VerdictForm,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ErrorDetail,
  ) {
    super(detail.message);
    this.name = "ServiceError";
  }

  /** Status 0 means the request never reached the service. */
  get offline(): boolean {
    return this.status === 0;
  }
}

export class StaleRevisionError extends Error {
  constructor(
    readonly formRevision: number,
    readonly currentRevision: number,
  ) {
    super(
      `form was built against revision ${formRevision} but the board ` +
        `has moved to ${currentRevision}; refresh before submitting`,
    );
    this.name = "StaleRevisionError";
  }
}

function asDetail(body: unknown): ErrorDetail {
  if (typeof body === "object" && body !== null && "detail" in body) {
    const detail = (body as { detail: unknown }).detail;
    if (typeof detail === "string") {
      return { message: detail };
    }
    if (
      typeof detail === "object" &&
      detail !== null &&
      typeof (detail as { message?: unknown }).message === "string"
    ) {
      return detail as ErrorDetail;
    }
  }
  return { message: "request failed" };
}

export class SessionClient {
  private readonly fetchImpl: FetchLike;
  sessionId: string | null = null;
  revision = -1;

  constructor(
    readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers:
          body === undefined ? {} : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new ServiceError(0, {
        message: `service unreachable: ${String(cause)}`,
      });
    }
    if (!response.ok) {
      throw new ServiceError(
        response.status,
        asDetail(await response.json().catch(() => null)),
      );
    }
    return (await response.json()) as T;
  }

  private id(): string {
    if (this.sessionId === null) {
      throw new ServiceError(0, { message: "no session open" });
    }
    return this.sessionId;
  }

  async listModels(): Promise<string[]> {
    const body = await this.request<{ models: string[] }>("GET", "/models");
    return body.models;
  }

  async topology(model: string): Promise<TopologyJson> {
    return this.request("GET", `/models/${encodeURIComponent(model)}/topology`);
  }

  /** `model` may be a served model's name or full model text. */
  async open(model: string, observations: string): Promise<SessionOpened> {
    const opened = await this.request<SessionOpened>("POST", "/sessions", {
      model,
      observations,
    });
    this.sessionId = opened.session_id;
    this.revision = opened.revision;
    return opened;
  }

  /** Fetch the board; the revision token lets the service flag staleness. */
  async board(): Promise<BoardJson> {
    const board = await this.request<BoardJson>(
      "GET",
      `/sessions/${this.id()}/board?revision=${this.revision}`,
    );
    this.revision = board.revision;
    return board;
  }

  async probes(): Promise<ProbesJson> {
    return this.request("GET", `/sessions/${this.id()}/probes`);
  }

  /**
   * Record a probe result.  `formRevision` is the revision the form was
   * rendered from; if polling has advanced past it the submission is
   * rejected here, without touching the service.
   */
  async observe(
    form: ObservationForm,
    formRevision: number,
  ): Promise<BoardJson> {
    if (formRevision !== this.revision) {
      throw new StaleRevisionError(formRevision, this.revision);
    }
    const board = await this.request<BoardJson>(
      "POST",
      `/sessions/${this.id()}/observations`,
      form,
    );
    this.revision = board.revision;
    return board;
  }

  /** Hypothetical board; never recorded, never moves the revision. */
  async whatIf(form: ObservationForm): Promise<BoardJson> {
    return this.request("POST", `/sessions/${this.id()}/whatif`, form);
  }

  async verdict(form: VerdictForm): Promise<void> {
    await this.request("POST", `/sessions/${this.id()}/verdicts`, form);
  }

  async journal(): Promise<JournalJson> {
    return this.request("GET", `/sessions/${this.id()}/journal`);
  }
}
