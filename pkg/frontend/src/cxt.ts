/** Context upload parsing: Burmeister .cxt or the JSON context form. */

import type { ContextPayload } from "./types.js";

export function parseContext(text: string): ContextPayload {
    const trimmed = text.trimStart();
    if (trimmed.startsWith("{")) {
        const payload = JSON.parse(text) as Partial<ContextPayload>;
        if (!payload.objects || !payload.attributes || !payload.incidence) {
            throw new Error("context JSON needs objects, attributes, incidence");
        }
        return payload as ContextPayload;
    }
    return parseCxt(text);
}

export function parseCxt(text: string): ContextPayload {
    const lines = text.split("\n").map((line) => line.replace(/\r$/, ""));
    let pos = 0;
    const next = (): string => {
        while (pos < lines.length) {
            const line = lines[pos++];
            if (line.trim().length > 0) return line;
        }
        throw new Error("unexpected end of .cxt file");
    };
    if (next().trim() !== "B") {
        throw new Error("not a Burmeister context");
    }
    const nObjects = parseInt(next().trim(), 10);
    const nAttributes = parseInt(next().trim(), 10);
    if (!Number.isFinite(nObjects) || !Number.isFinite(nAttributes)) {
        throw new Error("invalid object/attribute counts");
    }
    const objects: string[] = [];
    const attributes: string[] = [];
    for (let i = 0; i < nObjects; i++) objects.push(next());
    for (let i = 0; i < nAttributes; i++) attributes.push(next());
    const incidence: boolean[][] = [];
    for (let g = 0; g < nObjects; g++) {
        const row = next();
        if (row.length < nAttributes) {
            throw new Error(`incidence row ${g} too short`);
        }
        const bits: boolean[] = [];
        for (let m = 0; m < nAttributes; m++) {
            const c = row[m];
            if (c === "x" || c === "X") bits.push(true);
            else if (c === ".") bits.push(false);
            else throw new Error(`unexpected incidence character '${c}'`);
        }
        incidence.push(bits);
    }
    return { objects, attributes, incidence };
}
