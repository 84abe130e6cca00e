// SVG rendering for the playground: two vertex circles for the graph game,
// a centre-pair selector plus one projected circle for the hypergraph game.

import { SessionViewModel, circularLayout, graphEdgeText } from "./viewmodel.js";

const COLORS: Record<string, string> = {
    P1: "#d0483e",
    P2: "#2b6cb0",
    free: "#d8d8d8",
    legal: "#b9cfb2",
    base: "#1a2f66",
};

function el<K extends keyof SVGElementTagNameMap>(
        tag: K, attrs: Record<string, string | number>): SVGElementTagNameMap[K] {
    const node = document.createElementNS("http://www.w3.org/2000/svg", tag);
    for (const [k, v] of Object.entries(attrs)) {
        node.setAttribute(k, String(v));
    }
    return node;
}

export function renderBoards(vm: SessionViewModel, svg: SVGSVGElement): void {
    svg.replaceChildren();
    if (vm.game === "graph") {
        renderClique(vm, svg, 1, 170, 190, 140);
        renderClique(vm, svg, 2, 510, 190, 140);
        svg.append(caption(170, 370, "copy 1 (P1 opens here)"));
        svg.append(caption(510, 370, "copy 2 (P2 builds here)"));
    } else {
        renderProjection(vm, svg, 340, 190, 150);
        const [x, y] = vm.centrePair;
        svg.append(caption(340, 370,
            `pairs through centres {${x}, ${y}}`));
    }
}

function caption(x: number, y: number, text: string): SVGTextElement {
    const t = el("text", { x, y, "text-anchor": "middle", "font-size": 13,
                           fill: "#444" });
    t.textContent = text;
    return t;
}

function renderClique(vm: SessionViewModel, svg: SVGSVGElement, copy: number,
                      cx: number, cy: number, r: number): void {
    const pts = circularLayout(vm.n, cx, cy, r);
    for (let a = 0; a < vm.n; a++) {
        for (let b = a + 1; b < vm.n; b++) {
            drawEdge(vm, svg, vm.game === "graph"
                ? graphEdgeText(copy, a, b)
                : "", pts[a], pts[b]);
        }
    }
    pts.forEach((p, i) => drawVertex(svg, p, i));
}

function renderProjection(vm: SessionViewModel, svg: SVGSVGElement,
                          cx: number, cy: number, r: number): void {
    const verts = vm.projectedVertices();
    const pts = circularLayout(verts.length, cx, cy, r);
    for (let i = 0; i < verts.length; i++) {
        for (let j = i + 1; j < verts.length; j++) {
            drawEdge(vm, svg, vm.projectedEdgeText(verts[i], verts[j]),
                     pts[i], pts[j]);
        }
    }
    pts.forEach((p, i) => drawVertex(svg, p, verts[i]));
}

function drawEdge(vm: SessionViewModel, svg: SVGSVGElement, text: string,
                  a: { x: number; y: number }, b: { x: number; y: number }):
        void {
    const info = vm.edgeInfo(text);
    const line = el("line", {
        x1: a.x, y1: a.y, x2: b.x, y2: b.y,
        stroke: info.owner ? COLORS[info.owner]
            : info.legal ? COLORS.legal : COLORS.free,
        "stroke-width": info.isPotentialBase ? 5 : info.owner ? 2.4 : 1,
        "stroke-dasharray": info.owner === "P1" ? "6 3" : "",
        opacity: info.owner || info.legal ? 1 : 0.45,
    });
    line.classList.add("edge");
    line.dataset.edge = text;
    if (info.threatFor) {
        line.setAttribute("stroke", info.threatFor === "P1"
            ? "#ff9b00" : "#7bdcb5");
        line.setAttribute("stroke-width", "3.5");
    }
    if (info.legal) {
        line.addEventListener("click", () => {
            void vm.submitEdge(text).then((ok) => {
                if (!ok) shake(line);
            });
        });
        line.setAttribute("cursor", "pointer");
    }
    svg.append(line);
}

function shake(node: SVGElement): void {
    node.animate?.(
        [{ transform: "translate(0)" }, { transform: "translate(3px)" },
         { transform: "translate(-3px)" }, { transform: "translate(0)" }],
        { duration: 180 });
}

function drawVertex(svg: SVGSVGElement, p: { x: number; y: number },
                    label: number): void {
    svg.append(el("circle", { cx: p.x, cy: p.y, r: 7, fill: "#fff",
                              stroke: "#333", "stroke-width": 1.3 }));
    const t = el("text", { x: p.x, y: p.y + 3.5, "text-anchor": "middle",
                           "font-size": 9, fill: "#222" });
    t.textContent = String(label);
    svg.append(t);
}

export function renderSidebar(vm: SessionViewModel, root: HTMLElement): void {
    const banner = root.querySelector<HTMLElement>("#banner")!;
    const path = root.querySelector<HTMLElement>("#case-path")!;
    const ledger = root.querySelector<HTMLElement>("#ledger")!;
    const base = root.querySelector<HTMLElement>("#potential-base")!;
    const stop = root.querySelector<HTMLButtonElement>("#stop")!;

    if (vm.banner) {
        banner.textContent = vm.banner.text;
        banner.className = `banner ${vm.banner.kind}`;
    }
    path.replaceChildren();
    for (const label of vm.casePath()) {
        const chip = document.createElement("span");
        chip.className = "chip";
        chip.textContent = label;
        path.append(chip);
    }
    ledger.textContent = vm.ledgerText();
    const pb = vm.state?.potential_base;
    base.textContent = pb
        ? `potential base ${pb.edge} (special vertex ${pb.special.join(",")})`
        : "";
    stop.disabled = !vm.isHumanTurn();
}
