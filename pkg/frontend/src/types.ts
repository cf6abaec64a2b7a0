/** Wire types of the layout service. */

export interface ContextPayload {
    objects: string[];
    attributes: string[];
    incidence: boolean[][];
}

export interface LatticeConcept {
    index: number;
    extent: string[];
    intent: string[];
    object_labels: string[];
    attribute_labels: string[];
}

export interface LatticePayload {
    concepts: LatticeConcept[];
    covers: [number, number][];
    top: number;
    bottom: number;
}

export interface LayoutNode {
    concept: number;
    extent: string[];
    intent: string[];
    x: number;
    y: number;
}

export interface LayoutPayload {
    dimension: number;
    nodes: LayoutNode[];
}

export interface QualityMetrics {
    min_conflict_distance: number;
    edge_crossings: number;
    distinct_slopes: number;
    reference_distance?: number;
}

export interface DrawResponse {
    algo: string;
    stages: Record<string, LayoutPayload>;
    metrics: Record<string, QualityMetrics>;
    converged: boolean;
    flags: string[];
    lattice: LatticePayload;
}

export interface DragResponse {
    layout: LayoutPayload;
    accepted: boolean;
}

export interface SnapResponse {
    layout: LayoutPayload;
    valid: boolean;
}

/** Dense coordinate view of a layout, indexed by concept. */
export type Coordinates = Array<[number, number]>;

export function layoutToCoordinates(layout: LayoutPayload): Coordinates {
    const out: Coordinates = new Array(layout.nodes.length);
    for (const node of layout.nodes) {
        out[node.concept] = [node.x, node.y];
    }
    return out;
}

export function coordinatesToLayout(
    base: LayoutPayload,
    coords: Coordinates,
): LayoutPayload {
    return {
        dimension: 2,
        nodes: base.nodes.map((node) => ({
            ...node,
            x: coords[node.concept][0],
            y: coords[node.concept][1],
        })),
    };
}
