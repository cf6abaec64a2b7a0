/** Editor state: loaded context, draw result stages, active tab, metrics.
 *
 * Stage layouts arrive once per /draw call and are cached; switching the
 * stage tab re-renders locally without another server round trip.
 */

import type {
    ContextPayload,
    DrawResponse,
    LatticePayload,
    LayoutPayload,
    QualityMetrics,
} from "./types.js";

export class EditorState {
    context: ContextPayload | null = null;
    lattice: LatticePayload | null = null;
    result: DrawResponse | null = null;
    activeStage = "refined";
    serverCalls = 0;

    loadContext(context: ContextPayload): void {
        this.context = context;
        this.lattice = null;
        this.result = null;
    }

    applyDrawResponse(response: DrawResponse): void {
        this.result = response;
        this.lattice = response.lattice;
        this.activeStage = "refined" in response.stages ? "refined" : Object.keys(response.stages)[0];
        this.serverCalls += 1;
    }

    get stageNames(): string[] {
        return this.result ? Object.keys(this.result.stages) : [];
    }

    /** Pure lookup; never triggers a request. */
    selectStage(name: string): LayoutPayload {
        if (!this.result || !(name in this.result.stages)) {
            throw new Error(`unknown stage ${name}`);
        }
        this.activeStage = name;
        return this.result.stages[name];
    }

    get activeLayout(): LayoutPayload | null {
        return this.result ? this.result.stages[this.activeStage] : null;
    }

    /** Replace the active stage layout (after drags or snapping). */
    updateActiveLayout(layout: LayoutPayload): void {
        if (this.result) {
            this.result.stages[this.activeStage] = layout;
        }
    }

    get activeMetrics(): QualityMetrics | null {
        return this.result ? this.result.metrics[this.activeStage] ?? null : null;
    }
}
