import { BridgeClient } from "./protocol.js";
import { SessionViewModel } from "./viewmodel.js";
import { renderBoards, renderSidebar } from "./render.js";

const base = (window as unknown as { BRIDGE_URL?: string }).BRIDGE_URL
    ?? "http://127.0.0.1:8787";

const client = new BridgeClient(base, (url, init) =>
    fetch(url, init).then((r) => ({ status: r.status, json: () => r.json() })));
const vm = new SessionViewModel(client);

function boot(): void {
    const svg = document.querySelector<SVGSVGElement>("#board")!;
    const root = document.body;
    const form = document.querySelector<HTMLFormElement>("#setup")!;
    const pairSelect = document.querySelector<HTMLSelectElement>("#pair")!;

    vm.onChange(() => {
        renderBoards(vm, svg);
        renderSidebar(vm, root);
        pairSelect.parentElement!.style.display =
            vm.game === "hyper" ? "" : "none";
    });

    form.addEventListener("submit", (ev) => {
        ev.preventDefault();
        const game = (form.elements.namedItem("game") as HTMLSelectElement)
            .value as "graph" | "hyper";
        const n = Number(
            (form.elements.namedItem("n") as HTMLInputElement).value);
        void vm.start(game, n).then(() => {
            pairSelect.replaceChildren();
            for (const [a, b] of vm.centrePairs()) {
                const opt = document.createElement("option");
                opt.value = `${a}-${b}`;
                opt.textContent = `{${a}, ${b}}`;
                pairSelect.append(opt);
            }
        });
    });

    pairSelect.addEventListener("change", () => {
        const [a, b] = pairSelect.value.split("-").map(Number);
        vm.setCentrePair(a, b);
    });

    document.querySelector<HTMLButtonElement>("#stop")!
        .addEventListener("click", () => void vm.submitStop());
}

boot();
