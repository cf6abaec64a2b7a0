/** Client for the four layout-service endpoints.
 *
 * The transport is injectable so tests can script server behaviour without
 * a network; the default uses `fetch` against a configurable base URL.
 */

import type {
    ContextPayload,
    DragResponse,
    DrawResponse,
    LatticePayload,
    LayoutPayload,
    SnapResponse,
} from "./types.js";

export interface Transport {
    post(path: string, body: unknown): Promise<unknown>;
}

export class HttpTransport implements Transport {
    constructor(readonly baseUrl: string = "http://127.0.0.1:7878") {}

    async post(path: string, body: unknown): Promise<unknown> {
        const response = await fetch(this.baseUrl + path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        if (!response.ok) {
            const detail = await response.text();
            throw new Error(`${path} failed (${response.status}): ${detail}`);
        }
        return response.json();
    }
}

export class LayoutServiceClient {
    constructor(readonly transport: Transport) {}

    lattice(context: ContextPayload): Promise<LatticePayload> {
        return this.transport.post("/lattice", context) as Promise<LatticePayload>;
    }

    draw(
        context: ContextPayload,
        algo: string,
        config: Record<string, unknown> = {},
    ): Promise<DrawResponse> {
        return this.transport.post("/draw", { context, algo, config }) as Promise<DrawResponse>;
    }

    drag(
        context: ContextPayload,
        layout: LayoutPayload,
        concept: number,
        newPosition: [number, number],
    ): Promise<DragResponse> {
        return this.transport.post("/drag", {
            context,
            layout,
            concept,
            newPosition,
        }) as Promise<DragResponse>;
    }

    snap(
        context: ContextPayload,
        layout: LayoutPayload,
        gridStep: number,
    ): Promise<SnapResponse> {
        return this.transport.post("/snap", {
            context,
            layout,
            gridStep,
        }) as Promise<SnapResponse>;
    }
}
