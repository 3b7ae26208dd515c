import { describe, expect, test } from "vitest";

import {
  degreeBadge,
  degreeTitle,
  deltasAgainst,
  groupRows,
  renderBoard,
  renderProbes,
  renderRow,
  renderSideBySide,
  rowDelta,
} from "../src/board.js";
import type { BoardJson, BoardRowJson, DegreeJson } from "../src/types.js";

function degree(name: string, numerator: number, denominator = 1): DegreeJson {
  return { name, numerator, denominator };
}

const CERTAIN = degree("certain", 1);
const LIKELY = degree("likely", 3, 5);
const UNLIKELY = degree("unlikely", 2, 5);
const NONE = degree("possible", 0);

function row(overrides: Partial<BoardRowJson> & { label: string }): BoardRowJson {
  return {
    classification: "signature",
    status: "active",
    consistency: CERTAIN,
    abduction: NONE,
    abductive: false,
    dominated: [],
    expected: [],
    killed_by: null,
    verdict: null,
    ...overrides,
  };
}

function board(rows: BoardRowJson[], revision = 0): BoardJson {
  return { session_id: "s1", revision, rows, probes: [] };
}

describe("degree badges", () => {
  test("show the level name with the exact rational as tooltip", () => {
    expect(degreeBadge(LIKELY)).toBe(
      '<span class="degree" title="3/5">likely</span>',
    );
    expect(degreeTitle(CERTAIN)).toBe("1");
  });
});

describe("grouping", () => {
  test("partitions by standing without reordering", () => {
    const rows = [
      row({ label: "a", abductive: true }),
      row({ label: "b" }),
      row({ label: "c", abductive: true }),
      row({ label: "d", status: "discarded", killed_by: "x = Y certain" }),
      row({ label: "e" }),
    ];
    const groups = groupRows(rows);
    expect(groups.abductive.map((r) => r.label)).toEqual(["a", "c"]);
    expect(groups.consistent.map((r) => r.label)).toEqual(["b", "e"]);
    expect(groups.discarded.map((r) => r.label)).toEqual(["d"]);
  });

  test("a discarded abductive row counts as discarded", () => {
    const groups = groupRows([
      row({ label: "a", abductive: true, status: "discarded" }),
    ]);
    expect(groups.abductive).toEqual([]);
    expect(groups.discarded).toHaveLength(1);
  });
});

describe("row rendering", () => {
  test("strikes through discarded rows and names the killing observation", () => {
    const html = renderRow(
      row({
        label: "alim.out=ABS",
        status: "discarded",
        consistency: NONE,
        killed_by: "comp_0.out != ONE impossible",
      }),
    );
    expect(html).toContain("<s>alim.out=ABS</s>");
    expect(html).toContain("discarded by comp_0.out != ONE impossible");
    expect(html).toContain('class="row discarded"');
  });

  test("notes dominance and operator verdicts", () => {
    const html = renderRow(
      row({
        label: "rel_0.out=DEG",
        classification: "upstream_signature",
        dominated: ["res_0.out=DEG"],
        verdict: "relay commanded open",
      }),
    );
    expect(html).toContain("upstream signature");
    expect(html).toContain("upstream of res_0.out=DEG");
    expect(html).toContain("operator: relay commanded open");
  });

  test("escapes markup in service-sourced text", () => {
    const html = renderRow(row({ label: "<img>", verdict: '"quoted"' }));
    expect(html).not.toContain("<img>");
    expect(html).toContain("&lt;img&gt;");
    expect(html).toContain("&quot;quoted&quot;");
  });
});

describe("board rendering", () => {
  test("shows revision, counts, and an empty-state for the abductive group", () => {
    const html = renderBoard(board([row({ label: "a" })], 4));
    expect(html).toContain('data-revision="4"');
    expect(html).toContain("revision 4, 1 hypotheses");
    expect(html).toContain("no hypothesis covers every symptom");
  });

  test("keeps service order inside each group", () => {
    const html = renderBoard(
      board([row({ label: "z" }), row({ label: "a" })]),
    );
    expect(html.indexOf('data-label="z"')).toBeLessThan(
      html.indexOf('data-label="a"'),
    );
  });
});

describe("change highlighting", () => {
  test("spells out a discard and a consistency demotion", () => {
    expect(
      rowDelta(row({ label: "a" }), row({ label: "a", status: "discarded" })),
    ).toBe("active → discarded");
    expect(
      rowDelta(
        row({ label: "a" }),
        row({ label: "a", consistency: UNLIKELY }),
      ),
    ).toBe("consistency certain → unlikely");
    expect(rowDelta(row({ label: "a" }), row({ label: "a" }))).toBeNull();
  });

  test("marks only the rows that moved", () => {
    const before = board([row({ label: "a" }), row({ label: "b" })]);
    const after = board(
      [row({ label: "a" }), row({ label: "b", consistency: UNLIKELY })],
      1,
    );
    const deltas = deltasAgainst(before, after);
    expect([...deltas.keys()]).toEqual(["b"]);

    const html = renderBoard(after, before);
    expect(html).toContain('class="row active changed" data-label="b"');
    expect(html).toContain("consistency certain → unlikely");
    expect(html).toContain('class="row active" data-label="a"');
  });
});

describe("probes and panes", () => {
  test("renders probe scores with strength badges", () => {
    const html = renderProbes([
      {
        component: "bus",
        param: "out",
        state: "DEG",
        score: 30,
        strength: LIKELY,
      },
    ]);
    expect(html).toContain("bus.out = DEG");
    expect(html).toContain("separates 30 pairs");
    expect(html).toContain('title="3/5">likely');
  });

  test("what-if renders beside the live board with deltas", () => {
    const live = board([row({ label: "a" })]);
    const shadow: BoardJson = {
      ...board([row({ label: "a", consistency: UNLIKELY })]),
      hypothetical: true,
    };
    const html = renderSideBySide(live, shadow);
    expect(html).toContain('class="pane live"');
    expect(html).toContain('class="pane hypothetical"');
    // the hypothetical pane explains what would change
    expect(html).toContain("consistency certain → unlikely");
  });
});
