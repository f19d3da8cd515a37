/** SQL editor pane: a textarea over a backdrop layer.
 *
 * The textarea owns the text and the caret; the backdrop repeats the
 * text behind it to paint highlight and error-underline ranges.  The
 * editor font is monospace, so the character under the mouse follows
 * from plain grid arithmetic (offsetAtPoint), no DOM measurement of
 * individual characters.
 */

export interface GridMetrics {
  charWidth: number;
  lineHeight: number;
  padLeft: number;
  padTop: number;
}

export interface Range {
  start: number;
  end: number;
  cls: string;
}

/** Character offset at a point inside the text grid, or null when the
 * point is past the end of its line or below the last line. */
export function offsetAtPoint(text: string, x: number, y: number,
                              m: GridMetrics): number | null {
  const col = Math.floor((x - m.padLeft) / m.charWidth);
  const line = Math.floor((y - m.padTop) / m.lineHeight);
  if (col < 0 || line < 0) return null;
  const lines = text.split("\n");
  if (line >= lines.length) return null;
  if (col >= lines[line].length) return null;
  let offset = 0;
  for (let i = 0; i < line; i++) offset += lines[i].length + 1;
  return offset + col;
}

/** Split text into backdrop segments so each highlight range becomes a
 * styled span; overlapping ranges merge their class names. */
export function segment(text: string, ranges: Range[]):
    { text: string; cls: string }[] {
  const cuts = new Set<number>([0, text.length]);
  for (const r of ranges) {
    cuts.add(Math.max(0, Math.min(r.start, text.length)));
    cuts.add(Math.max(0, Math.min(r.end, text.length)));
  }
  const points = [...cuts].sort((a, b) => a - b);
  const out: { text: string; cls: string }[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [a, b] = [points[i], points[i + 1]];
    if (a === b) continue;
    const classes = ranges
      .filter(r => r.start <= a && b <= r.end)
      .map(r => r.cls);
    out.push({ text: text.slice(a, b), cls: [...new Set(classes)].join(" ") });
  }
  return out;
}

export class Editor {
  readonly textarea: HTMLTextAreaElement;
  private readonly backdrop: HTMLElement;
  private highlight: Range | null = null;
  private errors: Range[] = [];
  private metrics: GridMetrics | null = null;
  onInput: (text: string) => void = () => {};
  onHoverOffset: (offset: number | null) => void = () => {};

  constructor(host: HTMLElement, initialText: string) {
    host.classList.add("editor");
    this.backdrop = document.createElement("pre");
    this.backdrop.className = "editor-backdrop";
    this.textarea = document.createElement("textarea");
    this.textarea.className = "editor-input";
    this.textarea.spellcheck = false;
    this.textarea.value = initialText;
    host.appendChild(this.backdrop);
    host.appendChild(this.textarea);

    this.textarea.addEventListener("input", () => {
      this.highlight = null;
      this.errors = [];
      this.redraw();
      this.onInput(this.textarea.value);
    });
    this.textarea.addEventListener("scroll", () => {
      this.backdrop.scrollTop = this.textarea.scrollTop;
      this.backdrop.scrollLeft = this.textarea.scrollLeft;
    });
    this.textarea.addEventListener("mousemove", ev => {
      const m = this.gridMetrics();
      const rect = this.textarea.getBoundingClientRect();
      const x = ev.clientX - rect.left + this.textarea.scrollLeft;
      const y = ev.clientY - rect.top + this.textarea.scrollTop;
      this.onHoverOffset(offsetAtPoint(this.textarea.value, x, y, m));
    });
    this.textarea.addEventListener("mouseleave", () => {
      this.onHoverOffset(null);
    });
    this.redraw();
  }

  get value(): string {
    return this.textarea.value;
  }

  set value(text: string) {
    this.textarea.value = text;
    this.highlight = null;
    this.errors = [];
    this.redraw();
  }

  setHighlight(start: number, end: number): void {
    this.highlight = { start, end, cls: "hl" };
    this.redraw();
  }

  clearHighlight(): void {
    this.highlight = null;
    this.redraw();
  }

  setErrors(ranges: { start: number; end: number }[]): void {
    this.errors = ranges.map(r => ({ ...r, cls: "err" }));
    this.redraw();
  }

  private redraw(): void {
    const ranges = [...this.errors];
    if (this.highlight) ranges.push(this.highlight);
    this.backdrop.textContent = "";
    for (const seg of segment(this.textarea.value, ranges)) {
      if (seg.cls) {
        const mark = document.createElement("mark");
        mark.className = seg.cls;
        mark.textContent = seg.text;
        this.backdrop.appendChild(mark);
      } else {
        this.backdrop.appendChild(document.createTextNode(seg.text));
      }
    }
    // trailing newline so the backdrop keeps the textarea's height
    this.backdrop.appendChild(document.createTextNode("\n"));
  }

  private gridMetrics(): GridMetrics {
    if (this.metrics) return this.metrics;
    const probe = document.createElement("span");
    probe.textContent = "0000000000";
    probe.style.visibility = "hidden";
    this.backdrop.appendChild(probe);
    const rect = probe.getBoundingClientRect();
    probe.remove();
    const style = getComputedStyle(this.textarea);
    this.metrics = {
      charWidth: rect.width / 10 || 8,
      lineHeight: rect.height || parseFloat(style.lineHeight) || 18,
      padLeft: parseFloat(style.paddingLeft) || 0,
      padTop: parseFloat(style.paddingTop) || 0,
    };
    return this.metrics;
  }
}
