/** Diagram pane: shows the server-rendered SVG as-is and wires hover
 * listeners onto elements by their id.  No drawing happens here. */

export class DiagramPane {
  private readonly host: HTMLElement;
  private highlighted: string[] = [];
  onHoverElement: (elementId: string | null) => void = () => {};

  constructor(host: HTMLElement) {
    this.host = host;
    host.classList.add("diagram");
  }

  /** Replace the pane content with the given SVG markup and attach
   * listeners to the listed element ids. */
  show(svg: string, elementIds: string[]): void {
    this.highlighted = [];
    this.host.innerHTML = svg;
    for (const id of elementIds) {
      const el = this.host.querySelector<Element>(`[id="${id}"]`);
      if (!el) continue;
      el.addEventListener("mouseenter", () => this.onHoverElement(id));
      el.addEventListener("mouseleave", () => this.onHoverElement(null));
    }
  }

  highlight(elementIds: string[]): void {
    this.clearHighlight();
    for (const [i, id] of elementIds.entries()) {
      const el = this.host.querySelector(`[id="${id}"]`);
      if (!el) continue;
      el.classList.add("hl");
      if (i === 0) el.classList.add("hl-primary");
      this.highlighted.push(id);
    }
  }

  clearHighlight(): void {
    for (const id of this.highlighted) {
      const el = this.host.querySelector(`[id="${id}"]`);
      el?.classList.remove("hl", "hl-primary");
    }
    this.highlighted = [];
  }

  get svgElement(): SVGSVGElement | null {
    return this.host.querySelector("svg");
  }
}
