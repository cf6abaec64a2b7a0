/** Pure SVG rendering of a line diagram.
 *
 * The output markup is a deterministic function of (lattice, layout,
 * options): node order follows concept indices, numbers are formatted with
 * fixed precision, and nothing time- or environment-dependent is embedded.
 * Mathematical y points up; the flip happens only in the emitted
 * coordinates.
 */

import type { Coordinates, LatticePayload } from "./types.js";

export interface RenderOptions {
    width: number;
    height: number;
    nodeRadius: number;
    labelMode: "none" | "reduced-labels" | "extents+intents";
    showGrid: boolean;
    gridStep: number;
    /** previous positions drawn as gray ghosts during a drag */
    ghost?: Coordinates | null;
    highlight?: number | null;
}

export const DEFAULT_OPTIONS: RenderOptions = {
    width: 640,
    height: 480,
    nodeRadius: 7,
    labelMode: "reduced-labels",
    showGrid: false,
    gridStep: 1,
    ghost: null,
    highlight: null,
};

function fmt(x: number): string {
    return x.toFixed(3);
}

function escapeXml(text: string): string {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

interface Frame {
    toX(x: number): number;
    toY(y: number): number;
    fromX(px: number): number;
    fromY(py: number): number;
}

/** Affine world-to-canvas map with padding, y flipped. */
export function canvasFrame(
    coords: Coordinates,
    options: RenderOptions,
): Frame {
    let xmin = Infinity, xmax = -Infinity, ymin = Infinity, ymax = -Infinity;
    for (const [x, y] of coords) {
        xmin = Math.min(xmin, x); xmax = Math.max(xmax, x);
        ymin = Math.min(ymin, y); ymax = Math.max(ymax, y);
    }
    if (!isFinite(xmin)) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    const pad = options.nodeRadius * 4;
    const spanX = Math.max(xmax - xmin, 1e-9);
    const spanY = Math.max(ymax - ymin, 1e-9);
    const scale = Math.min(
        (options.width - 2 * pad) / spanX,
        (options.height - 2 * pad) / spanY,
    );
    const offX = (options.width - scale * spanX) / 2;
    const offY = (options.height - scale * spanY) / 2;
    return {
        toX: (x) => offX + (x - xmin) * scale,
        toY: (y) => options.height - offY - (y - ymin) * scale,
        fromX: (px) => xmin + (px - offX) / scale,
        fromY: (py) => ymin + (options.height - offY - py) / scale,
    };
}

function labelFor(lattice: LatticePayload, i: number, mode: RenderOptions["labelMode"]): string {
    if (mode === "none") return "";
    const concept = lattice.concepts[i];
    if (mode === "extents+intents") {
        return `{${concept.extent.join(",")}} ; {${concept.intent.join(",")}}`;
    }
    const parts: string[] = [];
    if (concept.attribute_labels.length) parts.push(concept.attribute_labels.join(", "));
    if (concept.object_labels.length) parts.push(concept.object_labels.join(", "));
    return parts.join(" / ");
}

/** Render the diagram as a standalone SVG string. */
export function renderDiagram(
    lattice: LatticePayload,
    coords: Coordinates,
    options: RenderOptions = DEFAULT_OPTIONS,
): string {
    const frame = canvasFrame(options.ghost ? coords.concat(options.ghost) : coords, options);
    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${options.width}" ` +
        `height="${options.height}" viewBox="0 0 ${options.width} ${options.height}">`,
    );
    if (options.showGrid) {
        parts.push(renderGrid(coords, frame, options));
    }
    if (options.ghost) {
        for (let i = 0; i < options.ghost.length; i++) {
            const [x, y] = options.ghost[i];
            parts.push(
                `  <circle class="ghost" cx="${fmt(frame.toX(x))}" cy="${fmt(frame.toY(y))}" ` +
                `r="${fmt(options.nodeRadius)}" fill="#bbbbbb" opacity="0.6"/>`,
            );
        }
    }
    for (const [lo, up] of lattice.covers) {
        parts.push(
            `  <line x1="${fmt(frame.toX(coords[lo][0]))}" y1="${fmt(frame.toY(coords[lo][1]))}" ` +
            `x2="${fmt(frame.toX(coords[up][0]))}" y2="${fmt(frame.toY(coords[up][1]))}" ` +
            `stroke="black" stroke-width="1.5"/>`,
        );
    }
    for (let i = 0; i < coords.length; i++) {
        const [x, y] = coords[i];
        const fill = options.highlight === i ? "#ffd24d" : "white";
        parts.push(
            `  <circle class="concept" data-concept="${i}" cx="${fmt(frame.toX(x))}" ` +
            `cy="${fmt(frame.toY(y))}" r="${fmt(options.nodeRadius)}" ` +
            `fill="${fill}" stroke="black" stroke-width="1.5"/>`,
        );
        const label = labelFor(lattice, i, options.labelMode);
        if (label) {
            parts.push(
                `  <text x="${fmt(frame.toX(x) + options.nodeRadius * 1.4)}" ` +
                `y="${fmt(frame.toY(y) - options.nodeRadius * 1.4)}" ` +
                `font-size="11" font-family="sans-serif">${escapeXml(label)}</text>`,
            );
        }
    }
    parts.push("</svg>");
    return parts.join("\n");
}

function renderGrid(coords: Coordinates, frame: Frame, options: RenderOptions): string {
    let xmin = Infinity, xmax = -Infinity, ymin = Infinity, ymax = -Infinity;
    for (const [x, y] of coords) {
        xmin = Math.min(xmin, x); xmax = Math.max(xmax, x);
        ymin = Math.min(ymin, y); ymax = Math.max(ymax, y);
    }
    const step = options.gridStep;
    const lines: string[] = [];
    for (let gx = Math.floor(xmin / step) * step; gx <= xmax + step / 2; gx += step) {
        lines.push(
            `  <line x1="${fmt(frame.toX(gx))}" y1="0" x2="${fmt(frame.toX(gx))}" ` +
            `y2="${options.height}" stroke="#e0e0ff" stroke-width="0.5"/>`,
        );
    }
    for (let gy = Math.floor(ymin / step) * step; gy <= ymax + step / 2; gy += step) {
        lines.push(
            `  <line x1="0" y1="${fmt(frame.toY(gy))}" x2="${options.width}" ` +
            `y2="${fmt(frame.toY(gy))}" stroke="#e0e0ff" stroke-width="0.5"/>`,
        );
    }
    return lines.join("\n");
}
