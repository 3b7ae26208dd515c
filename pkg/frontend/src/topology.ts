/**
 * Topology rendering: the component graph as layered SVG, with the
 * components that can still influence a selected symptom emphasized.
 *
 * Upstream membership is plain link reachability — a graph walk, not a
 * judgment about degrees, which stay server-side.
 */

import { escapeHtml } from "./board.js";
import type { EndpointJson, TopologyJson } from "./types.js";

/** Components from which links can reach the symptom's component. */
export function upstreamComponents(
  topology: TopologyJson,
  symptom: EndpointJson,
): Set<string> {
  const feeders = new Map<string, string[]>();
  for (const link of topology.links) {
    const into = feeders.get(link.target.component) ?? [];
    into.push(link.source.component);
    feeders.set(link.target.component, into);
  }
  const upstream = new Set<string>([symptom.component]);
  const queue = [symptom.component];
  while (queue.length > 0) {
    const current = queue.pop() as string;
    for (const source of feeders.get(current) ?? []) {
      if (!upstream.has(source)) {
        upstream.add(source);
        queue.push(source);
      }
    }
  }
  return upstream;
}

/**
 * Longest-path layering: sources in layer 0, every other component one
 * past its deepest feeder.  Declaration order breaks ties inside a layer.
 */
export function layerComponents(topology: TopologyJson): string[][] {
  const depth = new Map<string, number>();
  for (const comp of topology.components) {
    depth.set(comp.name, 0);
  }
  // Relax |components| times; the graph is acyclic by construction.
  for (let pass = 0; pass < topology.components.length; pass += 1) {
    let moved = false;
    for (const link of topology.links) {
      const sourceDepth = depth.get(link.source.component) ?? 0;
      const targetDepth = depth.get(link.target.component) ?? 0;
      if (targetDepth < sourceDepth + 1) {
        depth.set(link.target.component, sourceDepth + 1);
        moved = true;
      }
    }
    if (!moved) {
      break;
    }
  }
  const layers: string[][] = [];
  for (const comp of topology.components) {
    const layer = depth.get(comp.name) ?? 0;
    while (layers.length <= layer) {
      layers.push([]);
    }
    (layers[layer] as string[]).push(comp.name);
  }
  return layers.filter((layer) => layer.length > 0);
}

const BOX_WIDTH = 132;
const BOX_HEIGHT = 36;
const X_GAP = 180;
const Y_GAP = 56;

interface Point {
  x: number;
  y: number;
}

function positions(layers: string[][]): Map<string, Point> {
  const at = new Map<string, Point>();
  layers.forEach((layer, i) => {
    layer.forEach((name, j) => {
      at.set(name, { x: 20 + i * X_GAP, y: 20 + j * (BOX_HEIGHT + Y_GAP) });
    });
  });
  return at;
}

/**
 * The whole network as SVG.  When a symptom is selected, components and
 * links on a path into it get the `upstream` class; components with a
 * measurable output are marked.
 */
export function renderTopology(
  topology: TopologyJson,
  symptom: EndpointJson | null = null,
): string {
  const upstream =
    symptom === null ? new Set<string>() : upstreamComponents(topology, symptom);
  const layers = layerComponents(topology);
  const at = positions(layers);

  const edges = topology.links
    .map((link) => {
      const from = at.get(link.source.component);
      const to = at.get(link.target.component);
      if (from === undefined || to === undefined) {
        return "";
      }
      const emphasized =
        upstream.has(link.source.component) &&
        upstream.has(link.target.component);
      return (
        `<line class="link${emphasized ? " upstream" : ""}" ` +
        `x1="${from.x + BOX_WIDTH}" y1="${from.y + BOX_HEIGHT / 2}" ` +
        `x2="${to.x}" y2="${to.y + BOX_HEIGHT / 2}">` +
        `<title>${escapeHtml(link.source.component)}.` +
        `${escapeHtml(link.source.param)} → ` +
        `${escapeHtml(link.target.component)}.` +
        `${escapeHtml(link.target.param)}</title></line>`
      );
    })
    .join("");

  const boxes = topology.components
    .map((comp) => {
      const point = at.get(comp.name);
      if (point === undefined) {
        return "";
      }
      const classes = ["component"];
      if (upstream.has(comp.name)) {
        classes.push("upstream");
      }
      const measurable = comp.params.some((p) => p.observable);
      const title = measurable ? `${comp.name} ◉` : comp.name;
      return (
        `<g class="${classes.join(" ")}" data-component="` +
        `${escapeHtml(comp.name)}">` +
        `<rect x="${point.x}" y="${point.y}" width="${BOX_WIDTH}" ` +
        `height="${BOX_HEIGHT}" rx="4"></rect>` +
        `<text x="${point.x + BOX_WIDTH / 2}" ` +
        `y="${point.y + BOX_HEIGHT / 2 + 4}" text-anchor="middle">` +
        `${escapeHtml(title)}</text></g>`
      );
    })
    .join("");

  const width = 40 + layers.length * X_GAP;
  const height =
    40 +
    Math.max(...layers.map((layer) => layer.length), 1) *
      (BOX_HEIGHT + Y_GAP);
  return (
    `<svg class="topology" viewBox="0 0 ${width} ${height}" ` +
    `xmlns="http://www.w3.org/2000/svg">${edges}${boxes}</svg>`
  );
}
