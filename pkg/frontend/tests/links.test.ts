import { describe, expect, it } from "vitest";

import { buildLinks, linkForElement, linksAtOffset } from "../src/links.js";
import type { Interchange, VisualizeResponse } from "../src/types.js";

import qsomeResponse from "./fixtures/qsome.response.json";
import qonlyResponse from "./fixtures/qonly.response.json";

const qsome = (qsomeResponse as unknown as VisualizeResponse).interchange as Interchange;
const qonly = (qonlyResponse as unknown as VisualizeResponse).interchange as Interchange;

describe("buildLinks", () => {
  it("derives every link verbatim from the spans table", () => {
    const links = buildLinks(qsome);
    const elements = [
      ...qsome.nodes.map(n => ({ id: n.id, spanKey: n.spanKey })),
      ...qsome.edges.map(e => ({ id: e.id, spanKey: e.spanKey })),
      ...qsome.groups.map(g => ({ id: g.id, spanKey: g.spanKey })),
    ].filter(e => e.spanKey !== null);
    expect(links).toHaveLength(elements.length);
    for (const el of elements) {
      const link = linkForElement(links, el.id);
      expect(link).not.toBeNull();
      const [start, end] = qsome.spans[el.spanKey as string];
      expect(link!.spanStart).toBe(start);
      expect(link!.spanEnd).toBe(end);
    }
  });

  it("skips reading arrows, which carry no span", () => {
    const links = buildLinks(qonly);
    const arrowIds = new Set(qonly.arrows.map(a => a.id));
    expect(links.some(l => arrowIds.has(l.diagramElementId))).toBe(false);
  });
});

describe("hover resolution", () => {
  const links = buildLinks(qsome);
  const src = qsome.source;

  it("maps the F.bar = S.bar span to exactly one predicate edge", () => {
    const start = src.indexOf("F.bar = S.bar");
    expect(start).toBeGreaterThan(0);
    for (const offset of [start, start + 6, start + 12]) {
      const hits = linksAtOffset(links, offset);
      expect(hits).toHaveLength(1);
      expect(hits[0].elementKind).toBe("edge");
    }
    const edge = linksAtOffset(links, start)[0];
    // and back: that edge resolves to exactly that span
    const roundtrip = linkForElement(links, edge.diagramElementId)!;
    expect(src.slice(roundtrip.spanStart, roundtrip.spanEnd))
      .toBe("F.bar = S.bar");
  });

  it("is bidirectional for every link", () => {
    for (const link of links) {
      expect(linkForElement(links, link.diagramElementId)).toEqual(link);
      const mid = Math.floor((link.spanStart + link.spanEnd) / 2);
      const ids = linksAtOffset(links, mid).map(l => l.diagramElementId);
      expect(ids).toContain(link.diagramElementId);
    }
  });

  it("returns nothing for uncovered text", () => {
    const offset = src.indexOf("from"); // keyword between element spans
    expect(linksAtOffset(links, offset)).toHaveLength(0);
  });

  it("orders overlapping hits innermost first", () => {
    const nested = buildLinks(qonly);
    const offset = qonly.source.indexOf("S.drink = L.drink") + 3;
    const hits = linksAtOffset(nested, offset);
    expect(hits.length).toBeGreaterThan(1);
    expect(hits[0].elementKind).toBe("edge");
    for (let i = 1; i < hits.length; i++) {
      const prev = hits[i - 1].spanEnd - hits[i - 1].spanStart;
      const cur = hits[i].spanEnd - hits[i].spanStart;
      expect(prev).toBeLessThanOrEqual(cur);
    }
  });

  it("treats the end offset as exclusive", () => {
    const link = links.find(l => l.elementKind === "edge")!;
    expect(linksAtOffset(links, link.spanEnd)
      .map(l => l.diagramElementId)).not.toContain(link.diagramElementId);
  });
});
