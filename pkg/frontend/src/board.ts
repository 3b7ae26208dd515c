/**
 * Pure renderers for the hypothesis board.
 *
 * Every function here maps service JSON to an HTML string and nothing
 * else: no degree arithmetic, no re-ranking.  Rows keep the order the
 * service sent them in; grouping only partitions that order into the
 * abductive / consistent / discarded sections.
 */

import type {
  BoardJson,
  BoardRowJson,
  Classification,
  DegreeJson,
  ProbeJson,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/** Exact rational for the tooltip; the visible text stays ordinal. */
export function degreeTitle(degree: DegreeJson): string {
  return degree.denominator === 1
    ? `${degree.numerator}`
    : `${degree.numerator}/${degree.denominator}`;
}

export function degreeBadge(degree: DegreeJson): string {
  return (
    `<span class="degree" title="${degreeTitle(degree)}">` +
    `${escapeHtml(degree.name)}</span>`
  );
}

export const CLASS_BADGES: Record<Classification, string> = {
  identified_fault: "fault",
  upstream_signature: "upstream signature",
  signature: "signature",
};

export interface BoardGroups {
  abductive: BoardRowJson[];
  consistent: BoardRowJson[];
  discarded: BoardRowJson[];
}

/** Partition rows without reordering them. */
export function groupRows(rows: BoardRowJson[]): BoardGroups {
  const groups: BoardGroups = { abductive: [], consistent: [], discarded: [] };
  for (const row of rows) {
    if (row.status === "discarded") {
      groups.discarded.push(row);
    } else if (row.abductive) {
      groups.abductive.push(row);
    } else {
      groups.consistent.push(row);
    }
  }
  return groups;
}

/**
 * Human-readable change of one hypothesis between two boards, or null.
 * Used to highlight rows whose standing moved after an observation.
 */
export function rowDelta(
  before: BoardRowJson | undefined,
  after: BoardRowJson,
): string | null {
  if (before === undefined) {
    return null;
  }
  if (before.status !== after.status) {
    return `${before.status} → ${after.status}`;
  }
  if (before.consistency.name !== after.consistency.name) {
    return (
      `consistency ${before.consistency.name} → ` +
      after.consistency.name
    );
  }
  if (before.abduction.name !== after.abduction.name) {
    return `coverage ${before.abduction.name} → ${after.abduction.name}`;
  }
  return null;
}

export function deltasAgainst(
  previous: BoardJson | null,
  next: BoardJson,
): Map<string, string> {
  const deltas = new Map<string, string>();
  if (previous === null) {
    return deltas;
  }
  const earlier = new Map(previous.rows.map((row) => [row.label, row]));
  for (const row of next.rows) {
    const delta = rowDelta(earlier.get(row.label), row);
    if (delta !== null) {
      deltas.set(row.label, delta);
    }
  }
  return deltas;
}

export function renderRow(row: BoardRowJson, delta?: string): string {
  const classes = ["row", row.status];
  if (row.abductive) {
    classes.push("abductive");
  }
  if (delta !== undefined) {
    classes.push("changed");
  }
  const label =
    row.status === "discarded"
      ? `<s>${escapeHtml(row.label)}</s>`
      : escapeHtml(row.label);
  const notes: string[] = [];
  if (row.killed_by !== null) {
    notes.push(`discarded by ${escapeHtml(row.killed_by)}`);
  }
  if (row.verdict !== null) {
    notes.push(`operator: ${escapeHtml(row.verdict)}`);
  }
  for (const other of row.dominated) {
    notes.push(`upstream of ${escapeHtml(other)}`);
  }
  if (delta !== undefined) {
    notes.push(escapeHtml(delta));
  }
  return (
    `<tr class="${classes.join(" ")}" data-label="${escapeHtml(row.label)}">` +
    `<td class="label">${label}</td>` +
    `<td class="coverage">${degreeBadge(row.abduction)}</td>` +
    `<td class="consistency">${degreeBadge(row.consistency)}</td>` +
    `<td class="class">${CLASS_BADGES[row.classification]}</td>` +
    `<td class="notes">${notes.join("; ")}</td>` +
    `</tr>`
  );
}

const HEADER =
  "<tr><th>hypothesis</th><th>coverage</th><th>consistency</th>" +
  "<th>class</th><th>notes</th></tr>";

export function renderGroup(
  title: string,
  rows: BoardRowJson[],
  deltas: Map<string, string>,
  emptyMessage?: string,
): string {
  const body =
    rows.length === 0
      ? emptyMessage === undefined
        ? ""
        : `<p class="empty">${escapeHtml(emptyMessage)}</p>`
      : `<table>${HEADER}${rows
          .map((row) => renderRow(row, deltas.get(row.label)))
          .join("")}</table>`;
  return (
    `<section class="group ${title}">` +
    `<h2>${escapeHtml(title)} <span class="count">${rows.length}</span></h2>` +
    body +
    `</section>`
  );
}

/**
 * The full board.  Passing the previously rendered board highlights the
 * rows whose standing changed, with the change spelled out.
 */
export function renderBoard(
  board: BoardJson,
  previous: BoardJson | null = null,
): string {
  const groups = groupRows(board.rows);
  const deltas = deltasAgainst(previous, board);
  return (
    `<div class="board" data-revision="${board.revision}">` +
    `<header>revision ${board.revision}, ${board.rows.length} hypotheses` +
    `</header>` +
    renderGroup(
      "abductive",
      groups.abductive,
      deltas,
      "no hypothesis covers every symptom",
    ) +
    renderGroup("consistent", groups.consistent, deltas) +
    renderGroup("discarded", groups.discarded, deltas) +
    `</div>`
  );
}

export function renderProbes(probes: ProbeJson[]): string {
  const items = probes
    .map(
      (probe) =>
        `<li data-endpoint="${escapeHtml(probe.component)}.` +
        `${escapeHtml(probe.param)}">` +
        `${escapeHtml(probe.component)}.${escapeHtml(probe.param)} = ` +
        `${escapeHtml(probe.state)} <span class="score">separates ` +
        `${probe.score} pairs</span> ${degreeBadge(probe.strength)}</li>`,
    )
    .join("");
  return `<ol class="probes">${items}</ol>`;
}

/** Live board beside a what-if board; nothing about the live one changes. */
export function renderSideBySide(
  live: BoardJson,
  hypothetical: BoardJson,
): string {
  return (
    `<div class="panes">` +
    `<section class="pane live"><h1>live</h1>${renderBoard(live)}</section>` +
    `<section class="pane hypothetical"><h1>what-if</h1>` +
    `${renderBoard(hypothetical, live)}</section>` +
    `</div>`
  );
}
