import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { dirname, join } from "node:path";

import { EditorState } from "../src/state.js";
import type { ContextPayload, DrawResponse } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = JSON.parse(
    readFileSync(join(here, "fixtures", "dwarf_draw.json"), "utf-8"),
) as { context: ContextPayload; response: DrawResponse };

describe("EditorState", () => {
    it("caches stages so tab switching needs no server call", () => {
        const state = new EditorState();
        state.loadContext(fixture.context);
        state.applyDrawResponse(fixture.response);
        const calls = state.serverCalls;
        for (const name of state.stageNames) {
            const layout = state.selectStage(name);
            expect(layout.nodes.length).toBe(11);
        }
        expect(state.serverCalls).toBe(calls);
    });

    it("starts on the refined stage", () => {
        const state = new EditorState();
        state.applyDrawResponse(fixture.response);
        expect(state.activeStage).toBe("refined");
    });

    it("exposes the metrics of the active stage verbatim", () => {
        const state = new EditorState();
        state.applyDrawResponse(fixture.response);
        state.selectStage("embedded");
        expect(state.activeMetrics).toEqual(fixture.response.metrics["embedded"]);
        state.selectStage("refined");
        expect(state.activeMetrics).toEqual(fixture.response.metrics["refined"]);
    });

    it("rejects unknown stages", () => {
        const state = new EditorState();
        state.applyDrawResponse(fixture.response);
        expect(() => state.selectStage("imagined")).toThrow();
    });

    it("update of the active layout is confined to that stage", () => {
        const state = new EditorState();
        state.applyDrawResponse(JSON.parse(JSON.stringify(fixture.response)));
        const before = state.result!.stages["embedded"];
        state.selectStage("refined");
        const replacement = JSON.parse(JSON.stringify(state.activeLayout));
        replacement.nodes[0].x += 5;
        state.updateActiveLayout(replacement);
        expect(state.result!.stages["refined"].nodes[0].x).toBe(replacement.nodes[0].x);
        expect(state.result!.stages["embedded"]).toBe(before);
    });
});
