/** Editor wiring: context upload, algorithm runs, stage tabs, dragging,
 * snap-to-grid, and the metrics panel.
 *
 * All layout mutations flow through the server: the only coordinates the
 * client ever invents are the provisional position of the node under the
 * pointer, which the next accepted response replaces.
 */

import { HttpTransport, LayoutServiceClient } from "./api.js";
import { parseContext } from "./cxt.js";
import { DragController } from "./drag.js";
import { canvasFrame, DEFAULT_OPTIONS, renderDiagram, RenderOptions } from "./render.js";
import { EditorState } from "./state.js";
import { layoutToCoordinates } from "./types.js";
import type { Coordinates } from "./types.js";

export class EditorApp {
    readonly state = new EditorState();
    readonly client: LayoutServiceClient;
    private options: RenderOptions = { ...DEFAULT_OPTIONS };
    private drag: DragController | null = null;

    constructor(
        private readonly root: HTMLElement,
        baseUrl?: string,
        client?: LayoutServiceClient,
    ) {
        this.client = client ?? new LayoutServiceClient(new HttpTransport(baseUrl));
        this.buildDom();
    }

    private el<K extends keyof HTMLElementTagNameMap>(
        tag: K, attrs: Record<string, string> = {}, text = "",
    ): HTMLElementTagNameMap[K] {
        const node = document.createElement(tag);
        for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
        if (text) node.textContent = text;
        return node;
    }

    private buildDom(): void {
        const bar = this.el("div", { class: "toolbar" });
        const file = this.el("input", { type: "file", id: "context-file" });
        const algo = this.el("select", { id: "algo" });
        for (const name of ["dimflux", "dimdraw", "doubly-fdp", "attr-fdp"]) {
            algo.appendChild(this.el("option", { value: name }, name));
        }
        const run = this.el("button", { id: "run" }, "Run");
        const snap = this.el("button", { id: "snap" }, "Snap to grid");
        const step = this.el("input", { id: "grid-step", type: "number", value: "1", step: "0.25" });
        const grid = this.el("button", { id: "toggle-grid" }, "Grid");
        bar.append(file, algo, run, step, snap, grid);

        const tabs = this.el("div", { class: "tabs", id: "stage-tabs" });
        const view = this.el("div", { class: "diagram", id: "diagram" });
        view.innerHTML = "<p class='placeholder'>Load a context (.cxt or JSON) and run an algorithm.</p>";
        const metrics = this.el("div", { class: "metrics", id: "metrics" });
        this.root.append(bar, tabs, view, metrics);

        file.addEventListener("change", async () => {
            const chosen = file.files?.[0];
            if (!chosen) return;
            this.state.loadContext(parseContext(await chosen.text()));
        });
        run.addEventListener("click", () => void this.runAlgorithm(algo.value));
        snap.addEventListener("click", () => void this.snapToGrid(parseFloat(step.value)));
        grid.addEventListener("click", () => {
            this.options.showGrid = !this.options.showGrid;
            this.options.gridStep = parseFloat(step.value) || 1;
            this.rerender();
        });
    }

    async runAlgorithm(algo: string): Promise<void> {
        if (!this.state.context) return;
        const response = await this.client.draw(this.state.context, algo);
        this.state.applyDrawResponse(response);
        this.renderTabs();
        this.rerender();
    }

    async snapToGrid(gridStep: number): Promise<void> {
        const layout = this.state.activeLayout;
        if (!this.state.context || !layout || !(gridStep > 0)) return;
        const response = await this.client.snap(this.state.context, layout, gridStep);
        this.state.updateActiveLayout(response.layout);
        this.rerender();
    }

    private renderTabs(): void {
        const tabs = this.root.querySelector("#stage-tabs")!;
        tabs.innerHTML = "";
        for (const name of this.state.stageNames) {
            const button = this.el("button", { "data-stage": name }, name);
            if (name === this.state.activeStage) button.classList.add("active");
            button.addEventListener("click", () => {
                this.state.selectStage(name);   // cached: no server call
                this.renderTabs();
                this.rerender();
            });
            tabs.appendChild(button);
        }
    }

    rerender(ghost: Coordinates | null = null, provisional: Coordinates | null = null): void {
        const layout = this.state.activeLayout;
        const lattice = this.state.lattice;
        const view = this.root.querySelector("#diagram")!;
        if (!layout || !lattice) return;
        const coords = provisional ?? layoutToCoordinates(layout);
        view.innerHTML = renderDiagram(lattice, coords, { ...this.options, ghost });
        this.renderMetrics();
        this.attachDragHandlers(coords);
    }

    private renderMetrics(): void {
        const panel = this.root.querySelector("#metrics")!;
        const metrics = this.state.activeMetrics;
        if (!metrics) { panel.innerHTML = ""; return; }
        panel.innerHTML = "";
        const rows: [string, string][] = [
            ["min conflict distance", String(metrics.min_conflict_distance)],
            ["edge crossings", String(metrics.edge_crossings)],
            ["distinct slopes", String(metrics.distinct_slopes)],
        ];
        for (const [key, value] of rows) {
            const row = this.el("div", { class: "metric" });
            row.append(this.el("span", {}, key + ": "), this.el("strong", {}, value));
            panel.appendChild(row);
        }
    }

    private attachDragHandlers(coords: Coordinates): void {
        const view = this.root.querySelector("#diagram")!;
        const svg = view.querySelector("svg");
        if (!svg || !this.state.context || !this.state.lattice) return;
        const frame = canvasFrame(coords, this.options);
        svg.querySelectorAll("circle.concept").forEach((circle) => {
            circle.addEventListener("pointerdown", (event) => {
                const concept = parseInt((circle as SVGCircleElement).dataset.concept ?? "-1", 10);
                const layout = this.state.activeLayout;
                if (concept < 0 || !layout) return;
                this.drag = new DragController(this.client, this.state.context!, {
                    onProvisional: (c, ghost) => this.rerender(ghost, c),
                    onAccepted: (accepted) => {
                        this.state.updateActiveLayout(accepted);
                        this.rerender(this.drag?.ghostCoordinates ?? null);
                    },
                });
                this.drag.begin(concept, layout);
                const onMove = (move: PointerEvent) => {
                    const rect = svg.getBoundingClientRect();
                    void this.drag?.move([
                        frame.fromX(move.clientX - rect.left),
                        frame.fromY(move.clientY - rect.top),
                    ]);
                };
                const onUp = async () => {
                    svg.removeEventListener("pointermove", onMove);
                    svg.removeEventListener("pointerup", onUp);
                    const final = await this.drag?.end();
                    if (final) this.state.updateActiveLayout(final);
                    this.drag = null;
                    this.rerender();   // ghost disappears after the drag
                };
                svg.addEventListener("pointermove", onMove);
                svg.addEventListener("pointerup", onUp);
                event.preventDefault();
            });
        });
    }
}

declare global {
    interface Window {
        latfluxEditor?: EditorApp;
    }
}

if (typeof document !== "undefined" && document.getElementById("editor-root")) {
    window.latfluxEditor = new EditorApp(document.getElementById("editor-root")!);
}
