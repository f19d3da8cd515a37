/** Wires the editor, toolbar, and diagram pane to the service client.
 *
 * All query structure comes from the service response; the studio
 * treats the SQL text as an opaque string.  A failed parse keeps the
 * last good diagram on screen with the offending span underlined, and
 * a network failure shows a banner without touching the panes.
 */
import { isAbort, ServiceError, VisualizeClient } from "./api.js";
import { debounce, Debounced } from "./debounce.js";
import { DiagramPane } from "./diagram.js";
import { Editor } from "./editor.js";
import { buildLinks, linkForElement, linksAtOffset } from "./links.js";
import type {
  Diagnostic,
  HighlightLink,
  VisualizeResponse,
} from "./types.js";

export interface StudioOptions {
  initialSql?: string;
  debounceMs?: number;
  dialect?: string;
  forall?: boolean;
}

const DEFAULT_SQL = `select distinct F.person
from Frequents F, Likes L, Serves S
where F.person = L.person
and F.bar = S.bar
and L.drink = S.drink
`;

export class Studio {
  readonly editor: Editor;
  readonly diagram: DiagramPane;
  readonly dialectSelect: HTMLSelectElement;
  readonly forallToggle: HTMLInputElement;
  readonly banner: HTMLElement;
  readonly diagnosticsList: HTMLElement;

  private links: HighlightLink[] = [];
  private lastGood: VisualizeResponse | null = null;
  private readonly requestSoon: Debounced<[]>;

  constructor(root: HTMLElement, private readonly client: VisualizeClient,
              options: StudioOptions = {}) {
    root.classList.add("studio");

    const toolbar = document.createElement("div");
    toolbar.className = "toolbar";
    this.dialectSelect = document.createElement("select");
    this.dialectSelect.className = "dialect";
    for (const d of ["queryvis", "relational-diagrams"]) {
      const opt = document.createElement("option");
      opt.value = d;
      opt.textContent = d;
      this.dialectSelect.appendChild(opt);
    }
    this.dialectSelect.value = options.dialect ?? "queryvis";
    const forallLabel = document.createElement("label");
    this.forallToggle = document.createElement("input");
    this.forallToggle.type = "checkbox";
    this.forallToggle.className = "forall";
    this.forallToggle.checked = options.forall ?? true;
    forallLabel.appendChild(this.forallToggle);
    forallLabel.appendChild(document.createTextNode(" forall rewrite"));
    toolbar.appendChild(this.dialectSelect);
    toolbar.appendChild(forallLabel);
    root.appendChild(toolbar);

    this.banner = document.createElement("div");
    this.banner.className = "banner hidden";
    root.appendChild(this.banner);

    const panes = document.createElement("div");
    panes.className = "panes";
    const editorHost = document.createElement("div");
    const diagramHost = document.createElement("div");
    panes.appendChild(editorHost);
    panes.appendChild(diagramHost);
    root.appendChild(panes);

    this.diagnosticsList = document.createElement("ul");
    this.diagnosticsList.className = "diagnostics";
    root.appendChild(this.diagnosticsList);

    this.editor = new Editor(editorHost, options.initialSql ?? DEFAULT_SQL);
    this.diagram = new DiagramPane(diagramHost);

    this.requestSoon = debounce(() => {
      void this.request();
    }, options.debounceMs ?? 300);

    this.editor.onInput = () => this.requestSoon();
    this.dialectSelect.addEventListener("change", () => {
      this.requestSoon.cancel();
      void this.request();
    });
    this.forallToggle.addEventListener("change", () => {
      this.requestSoon.cancel();
      void this.request();
    });

    this.editor.onHoverOffset = offset => {
      if (offset === null) {
        this.diagram.clearHighlight();
        return;
      }
      const hits = linksAtOffset(this.links, offset);
      this.diagram.highlight(hits.map(l => l.diagramElementId));
    };
    this.diagram.onHoverElement = elementId => {
      if (elementId === null) {
        this.editor.clearHighlight();
        this.diagram.clearHighlight();
        return;
      }
      const link = linkForElement(this.links, elementId);
      if (!link) return;
      this.editor.setHighlight(link.spanStart, link.spanEnd);
      this.diagram.highlight([elementId]);
    };
  }

  /** Fire the initial render. */
  start(): void {
    void this.request();
  }

  get currentLinks(): readonly HighlightLink[] {
    return this.links;
  }

  get lastGoodResponse(): VisualizeResponse | null {
    return this.lastGood;
  }

  private async request(): Promise<void> {
    let response: VisualizeResponse;
    try {
      response = await this.client.visualize({
        sql: this.editor.value,
        dialect: this.dialectSelect.value,
        forall: this.forallToggle.checked,
      });
    } catch (err) {
      if (isAbort(err)) return; // a newer request took over
      this.showBanner(err instanceof ServiceError
        ? `cannot reach the visualization service: ${err.message}`
        : String(err));
      return;
    }
    this.hideBanner();
    this.apply(response);
  }

  private apply(response: VisualizeResponse): void {
    this.renderDiagnostics(response.diagnostics);
    if (response.svg !== null && response.interchange !== null) {
      this.lastGood = response;
      this.links = buildLinks(response.interchange);
      this.diagram.show(response.svg,
                        this.links.map(l => l.diagramElementId));
      this.editor.setErrors([]);
    } else {
      // keep the last good diagram; underline what the service flagged
      this.editor.setErrors(response.diagnostics
        .filter(d => d.severity === "error" && d.start !== null)
        .map(d => ({ start: d.start as number, end: d.end ?? d.start as number })));
    }
  }

  private renderDiagnostics(diagnostics: Diagnostic[]): void {
    this.diagnosticsList.textContent = "";
    for (const d of diagnostics) {
      const li = document.createElement("li");
      li.className = `diag diag-${d.severity}`;
      li.textContent = `${d.severity}: ${d.message}`;
      this.diagnosticsList.appendChild(li);
    }
  }

  private showBanner(message: string): void {
    this.banner.textContent = message;
    this.banner.classList.remove("hidden");
  }

  private hideBanner(): void {
    this.banner.textContent = "";
    this.banner.classList.add("hidden");
  }
}
