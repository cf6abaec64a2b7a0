/** Drag interaction: chunked server round trips with resistance.
 *
 * While a pointer drag is in progress the controller holds the last layout
 * the server accepted; pointer movement is chunked into small steps, each
 * sent as a /drag request.  Requests are throttled (at most one every
 * `minIntervalMs`) with latest-wins semantics: targets arriving while a
 * request is in flight replace the queued one.  A rejected step leaves the
 * node at its last accepted position (it visibly resists), and the whole
 * diagram re-renders from each accepted response — the client never moves
 * any node other than the dragged one on its own.
 */

import type { LayoutServiceClient } from "./api.js";
import type { ContextPayload, Coordinates, LayoutPayload } from "./types.js";
import { layoutToCoordinates } from "./types.js";

export interface DragCallbacks {
    /** re-render with the provisional pointer position of the dragged node */
    onProvisional?(coords: Coordinates, ghost: Coordinates): void;
    /** re-render from an accepted server layout */
    onAccepted?(layout: LayoutPayload): void;
    /** a step was rejected (node resists) */
    onRejected?(): void;
}

export class DragController {
    private dragging = false;
    private concept = -1;
    private acceptedLayout: LayoutPayload | null = null;
    private ghost: Coordinates | null = null;
    private pendingTarget: [number, number] | null = null;
    private inFlight = false;
    private lastSent = -Infinity;
    private timer: ReturnType<typeof setTimeout> | null = null;
    requestCount = 0;

    constructor(
        private readonly client: LayoutServiceClient,
        private readonly context: ContextPayload,
        private readonly callbacks: DragCallbacks = {},
        private readonly minIntervalMs: number = 34, // <= 30 requests/second
        private readonly now: () => number = () => Date.now(),
    ) {}

    get isDragging(): boolean {
        return this.dragging;
    }

    /** Layout of the last accepted server response. */
    get layout(): LayoutPayload | null {
        return this.acceptedLayout;
    }

    /** Ghost positions (diagram at drag start), shown while dragging. */
    get ghostCoordinates(): Coordinates | null {
        return this.dragging ? this.ghost : null;
    }

    begin(concept: number, layout: LayoutPayload): void {
        this.dragging = true;
        this.concept = concept;
        this.acceptedLayout = layout;
        this.ghost = layoutToCoordinates(layout);
        this.pendingTarget = null;
        this.requestCount = 0;
    }

    /** Called for every pointer movement; provisional position is local. */
    move(target: [number, number]): Promise<void> {
        if (!this.dragging || !this.acceptedLayout) {
            return Promise.resolve();
        }
        this.pendingTarget = target;
        const coords = layoutToCoordinates(this.acceptedLayout);
        coords[this.concept] = target;
        this.callbacks.onProvisional?.(coords, this.ghost ?? []);
        return this.pump();
    }

    /** Finish the drag; resolves when no request remains in flight. */
    async end(): Promise<LayoutPayload | null> {
        await this.flush();
        this.dragging = false;
        const final = this.acceptedLayout;
        this.ghost = null;
        return final;
    }

    private async pump(): Promise<void> {
        if (this.inFlight || this.pendingTarget === null || !this.dragging) {
            return;
        }
        const wait = this.minIntervalMs - (this.now() - this.lastSent);
        if (wait > 0) {
            if (this.timer === null) {
                await new Promise<void>((resolve) => {
                    this.timer = setTimeout(() => {
                        this.timer = null;
                        resolve();
                    }, wait);
                });
                return this.pump();
            }
            return;
        }
        const target = this.pendingTarget;
        this.pendingTarget = null;
        this.inFlight = true;
        this.lastSent = this.now();
        this.requestCount += 1;
        try {
            const response = await this.client.drag(
                this.context,
                this.acceptedLayout!,
                this.concept,
                target,
            );
            if (response.accepted) {
                this.acceptedLayout = response.layout;
                this.callbacks.onAccepted?.(response.layout);
            } else {
                this.callbacks.onRejected?.();
            }
        } finally {
            this.inFlight = false;
        }
        if (this.pendingTarget !== null) {
            await this.pump();
        }
    }

    private async flush(): Promise<void> {
        while (this.inFlight || this.pendingTarget !== null) {
            if (!this.inFlight && this.pendingTarget !== null) {
                // force the last queued step out regardless of throttling
                this.lastSent = -Infinity;
                await this.pump();
            } else {
                await new Promise((resolve) => setTimeout(resolve, 1));
            }
        }
    }
}
