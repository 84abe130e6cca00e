// Typed client for the engine bridge. The fetch function is injectable so
// tests can run against a mock or a locally spawned bridge.

export type FetchLike = (url: string, init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
}) => Promise<{ status: number; json(): Promise<unknown> }>;

export interface TraceRecord {
    ply: number;
    player: "P1" | "P2";
    edge: string;
    case: string | null;
    ledger: { k: number; l: number } | null;
}

export interface MoveReply {
    p2_moves: string[];
    case: string | null;
    ledger: { k: number; l: number } | null;
    threats: { P1: string[]; P2: string[] };
    potential_base: { edge: string; special: number[] } | null;
    finished: boolean;
    winner: string | null;
    error?: string;
    finding?: string;
}

export interface StatePayload {
    game: "graph" | "hyper";
    n: number;
    to_move: string;
    owners: Record<string, "P1" | "P2">;
    trace: TraceRecord[];
    case_path: string[];
    case: string | null;
    ledger: { k: number; l: number } | null;
    threats: { P1: string[]; P2: string[] };
    potential_base: { edge: string; special: number[] } | null;
    finished: boolean;
    winner: string | null;
    truncated: string | null;
    p1_stopped: boolean;
}

export class BridgeError extends Error {
    constructor(message: string, public readonly status: number) {
        super(message);
    }
}

export class BridgeClient {
    constructor(private baseUrl: string, private fetchFn: FetchLike) {}

    private async request<T>(method: string, path: string,
                             body?: unknown): Promise<T> {
        const res = await this.fetchFn(this.baseUrl + path, {
            method,
            headers: { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const payload = await res.json() as Record<string, unknown>;
        if (res.status >= 400) {
            throw new BridgeError(String(payload["error"] ?? res.status),
                                  res.status);
        }
        return payload as T;
    }

    newGame(game: "graph" | "hyper", n: number):
            Promise<{ id: string; to_move: string }> {
        return this.request("POST", "/game", { game, n });
    }

    move(id: string, edge: string): Promise<MoveReply> {
        return this.request("POST", `/game/${id}/move`, { edge });
    }

    state(id: string): Promise<StatePayload> {
        return this.request("GET", `/game/${id}/state`);
    }

    hints(id: string): Promise<{ legal: string[]; to_move: string }> {
        return this.request("GET", `/game/${id}/hints`);
    }
}
