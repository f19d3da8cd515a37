/** Editor-to-diagram links, derived verbatim from an interchange document.
 *
 * Every diagram element that carries a spanKey contributes exactly one
 * HighlightLink whose offsets come from the document's spans table.  The
 * client never derives ranges from the SQL text itself.
 */
import type { HighlightLink, Interchange } from "./types.js";

export function buildLinks(doc: Interchange): HighlightLink[] {
  const links: HighlightLink[] = [];
  const add = (id: string, spanKey: string | null,
               kind: HighlightLink["elementKind"]) => {
    if (spanKey === null) return;
    const span = doc.spans[spanKey];
    if (!span) return;
    links.push({
      spanStart: span[0],
      spanEnd: span[1],
      diagramElementId: id,
      elementKind: kind,
    });
  };
  for (const n of doc.nodes) add(n.id, n.spanKey, "node");
  for (const e of doc.edges) add(e.id, e.spanKey, "edge");
  for (const g of doc.groups) add(g.id, g.spanKey, "group");
  return links;
}

/** Links whose range contains the offset, innermost (narrowest) first. */
export function linksAtOffset(links: HighlightLink[],
                              offset: number): HighlightLink[] {
  const hits = links.filter(
    l => l.spanStart <= offset && offset < l.spanEnd);
  hits.sort((a, b) =>
    (a.spanEnd - a.spanStart) - (b.spanEnd - b.spanStart)
    || a.spanStart - b.spanStart
    || a.diagramElementId.localeCompare(b.diagramElementId));
  return hits;
}

export function linkForElement(links: HighlightLink[],
                               elementId: string): HighlightLink | null {
  return links.find(l => l.diagramElementId === elementId) ?? null;
}
