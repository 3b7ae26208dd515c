/**
 * Browser wiring for the operator console.
 *
 * Pure rendering lives in board.ts/topology.ts and the service contract
 * in client.ts; this module owns the DOM: the connect form, the polling
 * loop keyed by the revision token, the observation and what-if forms,
 * and the inline error surfaces.  One tab drives one session.
 */

import {
  renderBoard,
  renderProbes,
  renderSideBySide,
  escapeHtml,
} from "./board.js";
import { SessionClient, ServiceError, StaleRevisionError } from "./client.js";
import { renderTopology } from "./topology.js";
import type {
  BoardJson,
  EndpointJson,
  ObservationForm,
  TopologyJson,
} from "./types.js";

const POLL_MS = 2000;

// The observation form's certainty vocabulary.  The service only ships
// level names inside degrees it has already computed, so the form
// mirrors the default scale; "impossible" is how an absence is ruled
// certain.  Adjust when serving models with a custom scale.
const LEVELS = [
  "certain",
  "almost_certain",
  "likely",
  "unlikely",
  "almost_impossible",
  "impossible",
];

function element<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  html?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (html !== undefined) {
    node.innerHTML = html;
  }
  return node;
}

function option(value: string): string {
  return `<option value="${escapeHtml(value)}">${escapeHtml(value)}</option>`;
}

export class ConsoleApp {
  private client: SessionClient | null = null;
  private topology: TopologyJson | null = null;
  private lastBoard: BoardJson | null = null;
  private shownBoard: BoardJson | null = null;
  private whatIfForm: ObservationForm | null = null;
  private whatIfRevision = -1;
  private timer: ReturnType<typeof setInterval> | null = null;

  private readonly banner = element("div");
  private readonly boardHost = element("div");
  private readonly probesHost = element("div");
  private readonly panesHost = element("div");
  private readonly topologyHost = element("div");
  private readonly formHost = element("div");
  private readonly formError = element("p");

  constructor(private readonly root: HTMLElement) {}

  start(): void {
    this.banner.className = "banner";
    this.banner.hidden = true;
    this.formError.className = "form-error";
    this.root.replaceChildren(this.banner, this.connectForm());
  }

  // -- session opening -------------------------------------------------

  private connectForm(): HTMLElement {
    const form = element(
      "form",
      `<h1>fault isolation console</h1>
       <label>service <input name="base" value="${escapeHtml(
         window.location.origin,
       )}" size="32"></label>
       <label>model <input name="model" value="solar_array"></label>
       <label>initial observations
         <textarea name="observations" rows="4" cols="48">
context rel_0=OFF rel_1=ON rel_2=OFF;
obs eclipse.signal = ONE certain;</textarea>
       </label>
       <button type="submit">open session</button>
       <p class="form-error"></p>`,
    );
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const data = new FormData(form);
      void this.open(
        String(data.get("base")),
        String(data.get("model")),
        String(data.get("observations")),
        form.querySelector(".form-error") as HTMLElement,
      );
    });
    return form;
  }

  private async open(
    base: string,
    model: string,
    observations: string,
    errorHost: HTMLElement,
  ): Promise<void> {
    const client = new SessionClient(base.replace(/\/$/, ""));
    try {
      await client.open(model, observations);
      this.topology = await client.topology(model);
    } catch (err) {
      errorHost.textContent =
        err instanceof ServiceError ? err.message : String(err);
      return;
    }
    this.client = client;
    this.mountSessionView();
    await this.refresh();
    this.timer = setInterval(() => void this.poll(), POLL_MS);
  }

  // -- main view -------------------------------------------------------

  private mountSessionView(): void {
    this.boardHost.className = "board-host";
    this.probesHost.className = "probes-host";
    this.panesHost.className = "panes-host";
    this.topologyHost.className = "topology-host";
    this.formHost.className = "form-host";
    this.formHost.replaceChildren(this.observationForm());
    this.root.replaceChildren(
      this.banner,
      this.boardHost,
      this.probesHost,
      this.formHost,
      this.panesHost,
      this.topologyHost,
    );
    this.renderTopologyView(null);
  }

  private observationForm(): HTMLElement {
    const topology = this.topology as TopologyJson;
    const measurable = topology.components.filter((c) =>
      c.params.some((p) => p.observable),
    );
    const form = element(
      "form",
      `<select name="component">${measurable
        .map((c) => option(c.name))
        .join("")}</select>
       <select name="output"></select>
       <select name="polarity">${option("present")}${option("absent")}</select>
       <select name="state"></select>
       <select name="level">${LEVELS.map(option).join("")}</select>
       <button type="submit" name="observe">record</button>
       <button type="button" name="whatif">what if?</button>`,
    );
    const componentSel = form.querySelector(
      "[name=component]",
    ) as HTMLSelectElement;
    const outputSel = form.querySelector("[name=output]") as HTMLSelectElement;
    const stateSel = form.querySelector("[name=state]") as HTMLSelectElement;

    const fillOutputs = () => {
      const comp = measurable.find((c) => c.name === componentSel.value);
      const outputs = (comp?.params ?? []).filter((p) => p.observable);
      outputSel.innerHTML = outputs.map((p) => option(p.name)).join("");
      fillStates();
    };
    const fillStates = () => {
      const comp = measurable.find((c) => c.name === componentSel.value);
      const out = comp?.params.find((p) => p.name === outputSel.value);
      stateSel.innerHTML = (out?.states ?? []).map(option).join("");
    };
    componentSel.addEventListener("change", fillOutputs);
    outputSel.addEventListener("change", fillStates);
    fillOutputs();

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submit(this.readForm(form), false);
    });
    (form.querySelector("[name=whatif]") as HTMLButtonElement).addEventListener(
      "click",
      () => void this.submit(this.readForm(form), true),
    );
    form.append(this.formError);
    return form;
  }

  private readForm(form: HTMLElement): ObservationForm {
    const value = (name: string) =>
      (form.querySelector(`[name=${name}]`) as HTMLSelectElement).value;
    return {
      component: value("component"),
      output: value("output"),
      state: value("state"),
      polarity: value("polarity") as "present" | "absent",
      level: value("level"),
    };
  }

  // -- mutations ---------------------------------------------------------

  private async submit(
    form: ObservationForm,
    hypothetical: boolean,
  ): Promise<void> {
    const client = this.client as SessionClient;
    this.formError.textContent = "";
    try {
      if (hypothetical) {
        this.whatIfForm = form;
        this.whatIfRevision = client.revision;
        const shadow = await client.whatIf(form);
        this.renderPanes(shadow);
        return;
      }
      const before = client.revision;
      const board = await client.observe(form, before);
      if (board.revision === before) {
        this.formError.textContent = "already observed; nothing changed";
      }
      this.clearPanes();
      this.show(board);
    } catch (err) {
      if (err instanceof StaleRevisionError) {
        this.formError.textContent = `${err.message} (board refreshed)`;
        await this.refresh();
      } else if (err instanceof ServiceError) {
        this.formError.textContent = err.message;
      } else {
        throw err;
      }
    }
  }

  private async commitWhatIf(): Promise<void> {
    if (this.whatIfForm === null) {
      return;
    }
    const form = this.whatIfForm;
    const client = this.client as SessionClient;
    try {
      const board = await client.observe(form, this.whatIfRevision);
      this.clearPanes();
      this.show(board);
    } catch (err) {
      if (err instanceof StaleRevisionError) {
        this.formError.textContent = `${err.message} (board refreshed)`;
        this.clearPanes();
        await this.refresh();
      } else if (err instanceof ServiceError) {
        this.formError.textContent = err.message;
      } else {
        throw err;
      }
    }
  }

  private async reject(label: string): Promise<void> {
    const reason = window.prompt(`why is ${label} rejected?`) ?? "";
    const client = this.client as SessionClient;
    try {
      await client.verdict({ label, reason });
      await this.refresh();
    } catch (err) {
      if (err instanceof ServiceError) {
        this.formError.textContent = err.message;
      } else {
        throw err;
      }
    }
  }

  // -- polling and rendering ---------------------------------------------

  private async poll(): Promise<void> {
    const client = this.client as SessionClient;
    try {
      const board = await client.board();
      this.banner.hidden = true;
      if (board.changed !== false) {
        this.show(board);
      }
    } catch (err) {
      if (err instanceof ServiceError && err.offline) {
        // Keep the last snapshot on screen; just say the service is gone.
        this.banner.textContent = "service unreachable; showing last snapshot";
        this.banner.hidden = false;
      } else if (err instanceof ServiceError) {
        this.banner.textContent = `${err.message} — retrying`;
        this.banner.hidden = false;
      } else {
        throw err;
      }
    }
  }

  private async refresh(): Promise<void> {
    const client = this.client as SessionClient;
    this.show(await client.board());
    const probes = await client.probes();
    this.probesHost.innerHTML = `<h2>probe queue</h2>${renderProbes(
      probes.probes,
    )}`;
  }

  private show(board: BoardJson): void {
    this.boardHost.innerHTML = renderBoard(board, this.shownBoard);
    this.shownBoard = this.lastBoard;
    this.lastBoard = board;
    this.boardHost.querySelectorAll(".row.active").forEach((row) => {
      const button = document.createElement("button");
      button.textContent = "reject";
      button.addEventListener("click", () => {
        void this.reject(row.getAttribute("data-label") ?? "");
      });
      row.querySelector(".notes")?.append(" ", button);
    });
  }

  private renderPanes(shadow: BoardJson): void {
    if (this.lastBoard === null) {
      return;
    }
    this.panesHost.innerHTML = renderSideBySide(this.lastBoard, shadow);
    const commit = document.createElement("button");
    commit.textContent = "commit";
    commit.addEventListener("click", () => void this.commitWhatIf());
    const dismiss = document.createElement("button");
    dismiss.textContent = "dismiss";
    dismiss.addEventListener("click", () => this.clearPanes());
    this.panesHost.querySelector(".hypothetical h1")?.append(
      " ",
      commit,
      " ",
      dismiss,
    );
  }

  private clearPanes(): void {
    this.panesHost.innerHTML = "";
    this.whatIfForm = null;
  }

  private renderTopologyView(symptom: EndpointJson | null): void {
    if (this.topology === null) {
      return;
    }
    this.topologyHost.innerHTML =
      `<h2>network</h2>` + renderTopology(this.topology, symptom);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
    }
  }
}

const host = document.getElementById("console");
if (host !== null) {
  new ConsoleApp(host).start();
}
