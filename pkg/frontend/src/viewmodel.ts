// Session state behind the playground. No game logic lives here beyond
// pre-filtering clicks against /hints; every displayed fact is read back
// from the engine bridge.

import { BridgeClient, BridgeError, StatePayload } from "./protocol.js";

export interface EdgeText {
    text: string;
    owner: "P1" | "P2" | null;
    legal: boolean;
    threatFor: "P1" | "P2" | null;
    isPotentialBase: boolean;
}

export interface Banner {
    kind: "info" | "win" | "error" | "finding";
    text: string;
}

export function graphEdgeText(copy: number, a: number, b: number): string {
    const [lo, hi] = a < b ? [a, b] : [b, a];
    return `g:${copy}:${lo}-${hi}`;
}

export function hyperEdgeText(vs: number[]): string {
    return "h:" + [...vs].sort((x, y) => x - y).join("-");
}

export function circularLayout(n: number, cx: number, cy: number,
                               r: number): Array<{ x: number; y: number }> {
    const pts = [];
    for (let i = 0; i < n; i++) {
        const angle = (2 * Math.PI * i) / n - Math.PI / 2;
        pts.push({ x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
    }
    return pts;
}

export class SessionViewModel {
    gameId: string | null = null;
    game: "graph" | "hyper" = "graph";
    n = 14;
    state: StatePayload | null = null;
    legal: Set<string> = new Set();
    banner: Banner | null = null;
    busy = false;
    // Hypergraph rendering works through one centre pair at a time.
    centrePair: [number, number] = [0, 1];
    listeners: Array<() => void> = [];

    constructor(private client: BridgeClient) {}

    onChange(fn: () => void): void {
        this.listeners.push(fn);
    }

    private emit(): void {
        for (const fn of this.listeners) fn();
    }

    validateN(n: number): string | null {
        if (!Number.isInteger(n)) return "n must be an integer";
        if (this.game === "graph" && n < 6) return "graph game needs n >= 6";
        if (this.game === "hyper" && n < 8) return "hyper game needs n >= 8";
        if (n > 40) return "n too large for the playground";
        return null;
    }

    async start(game: "graph" | "hyper", n: number): Promise<void> {
        const problem = Object.assign(this, { game }).validateN(n);
        if (problem) {
            this.banner = { kind: "error", text: problem };
            this.emit();
            return;
        }
        this.n = n;
        try {
            const created = await this.client.newGame(game, n);
            this.gameId = created.id;
            this.banner = { kind: "info", text: "your move: claim an edge" };
            await this.refresh();
        } catch (err) {
            this.banner = {
                kind: "error",
                text: `bridge unreachable: ${(err as Error).message}; retry`,
            };
            this.emit();
        }
    }

    async refresh(): Promise<void> {
        if (!this.gameId) return;
        this.state = await this.client.state(this.gameId);
        const hints = await this.client.hints(this.gameId);
        this.legal = new Set(hints.legal);
        this.emit();
    }

    casePath(): string[] {
        return this.state ? this.state.case_path : [];
    }

    currentCase(): string | null {
        return this.state?.case ?? null;
    }

    ledgerText(): string {
        const led = this.state?.ledger;
        return led ? `lost-edge ledger: k=${led.k}, l=${led.l}` : "";
    }

    isHumanTurn(): boolean {
        return !!this.state && this.state.to_move === "P1" &&
            !this.state.finished;
    }

    edgeInfo(text: string): EdgeText {
        const s = this.state;
        const owner = s?.owners[text] ?? null;
        const pb = s?.potential_base?.edge === text;
        let threatFor: "P1" | "P2" | null = null;
        if (s?.threats.P1.includes(text)) threatFor = "P1";
        else if (s?.threats.P2.includes(text)) threatFor = "P2";
        return {
            text,
            owner,
            legal: this.legal.has(text) && this.isHumanTurn(),
            threatFor,
            isPotentialBase: pb,
        };
    }

    async submitEdge(text: string): Promise<boolean> {
        if (!this.gameId || this.busy) return false;
        if (!this.isHumanTurn() || !this.legal.has(text)) {
            this.banner = { kind: "error", text: `illegal move ${text}` };
            this.emit();
            return false;
        }
        return this.submit(text);
    }

    async submitStop(): Promise<boolean> {
        if (!this.gameId || this.busy || !this.isHumanTurn()) return false;
        return this.submit("stop");
    }

    private async submit(edge: string): Promise<boolean> {
        this.busy = true;
        try {
            const reply = await this.client.move(this.gameId!, edge);
            await this.refresh();
            if (reply.finding) {
                this.banner = { kind: "finding", text: reply.finding };
            } else if (reply.finished && reply.winner === "P2") {
                this.banner = {
                    kind: "win",
                    text: "P2 completed his copy -- P2 wins the build race",
                };
            } else if (reply.finished) {
                this.banner = { kind: "info", text: "game over" };
            } else {
                this.banner = {
                    kind: "info",
                    text: `engine replied ${reply.p2_moves.join(", ")} ` +
                        `(case ${reply.case ?? "-"})`,
                };
            }
            this.emit();
            return true;
        } catch (err) {
            if (err instanceof BridgeError && err.status === 409) {
                this.banner = { kind: "error", text: err.message };
                this.emit();
                return false;
            }
            throw err;
        } finally {
            this.busy = false;
        }
    }

    // -- hypergraph projection helpers -------------------------------------

    centrePairs(): Array<[number, number]> {
        const out: Array<[number, number]> = [];
        for (let a = 0; a < this.n; a++) {
            for (let b = a + 1; b < this.n; b++) out.push([a, b]);
        }
        return out;
    }

    setCentrePair(a: number, b: number): void {
        this.centrePair = a < b ? [a, b] : [b, a];
        this.emit();
    }

    projectedVertices(): number[] {
        const [x, y] = this.centrePair;
        const out = [];
        for (let v = 0; v < this.n; v++) {
            if (v !== x && v !== y) out.push(v);
        }
        return out;
    }

    projectedEdgeText(u: number, v: number): string {
        const [x, y] = this.centrePair;
        return hyperEdgeText([x, y, u, v]);
    }
}
