// Full 45-pick draft walkthrough against a live server with the frequency
// agent: pack entry through the autocomplete, recommendation render, pick
// confirmation, pool/color updates, completion banner. Every displayed
// value is cross-checked against a direct API call (zero client-side logic
// divergence), and the run must finish without console errors.

import { type ChildProcess, execFileSync, spawn } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { afterAll, beforeAll, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { mountApp } from "../src/app.js";

const REPO_ROOT = resolve(__dirname, "..", "..");
const PORT = 8147;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | undefined;
let workDir: string;
const serverLog: string[] = [];

async function until(
	check: () => boolean | Promise<boolean>,
	what: string,
	timeoutMs = 15_000,
): Promise<void> {
	const start = Date.now();
	for (;;) {
		if (await check()) return;
		if (Date.now() - start > timeoutMs) {
			throw new Error(`timed out waiting for ${what}\nserver log:\n${serverLog.join("")}`);
		}
		await new Promise((r) => setTimeout(r, 15));
	}
}

beforeAll(async () => {
	workDir = mkdtempSync(join(tmpdir(), "draftkit-ui-"));
	// build a pick-frequency table from simulated drafts for the server
	execFileSync(
		"python3",
		[
			"-c",
			`
from draftkit.cards import load_card_set
from draftkit.draft import simulate_pod
from draftkit.agents import FrequencyTable
cs = load_card_set('data/neo_cards.json', 'NEO')
events = []
for s in range(3):
    events.extend(simulate_pod(cs, seed=1200 + s).events)
FrequencyTable.from_events(events).save(r'${join(workDir, "rates.json")}')
`,
		],
		{ cwd: REPO_ROOT },
	);
	const config = {
		listen: `127.0.0.1:${PORT}`,
		card_sets: { NEO: join(REPO_ROOT, "data", "neo_cards.json") },
		persistence_dir: join(workDir, "sessions"),
		frequency_table: join(workDir, "rates.json"),
	};
	const configPath = join(workDir, "config.json");
	writeFileSync(configPath, JSON.stringify(config));

	server = spawn(
		"python3",
		["-m", "draftkit.cli", "serve", "--config", configPath],
		{ cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
	);
	server.stdout?.on("data", (chunk) => serverLog.push(String(chunk)));
	server.stderr?.on("data", (chunk) => serverLog.push(String(chunk)));

	await until(async () => {
		try {
			const response = await fetch(`${BASE}/healthz`);
			return response.ok;
		} catch {
			return false;
		}
	}, "server /healthz");
}, 120_000);

afterAll(() => {
	server?.kill();
	rmSync(workDir, { recursive: true, force: true });
});

it("drives a complete 45-pick session with the frequency agent", async () => {
	const consoleErrors = vi.spyOn(console, "error");
	const api = new ApiClient(BASE);
	const allNames = await api.autocomplete("NEO", "");
	expect(allNames.length).toBe(20);

	const root = document.createElement("div");
	document.body.replaceChildren(root);
	window.location.hash = "";
	mountApp(root, api);

	const el = <T extends HTMLElement>(id: string) =>
		root.querySelector<T>(`#${id}`)!;
	const input = el<HTMLInputElement>("card-input");

	// start a frequency-agent session through the form
	el<HTMLInputElement>("set-code").value = "NEO";
	el<HTMLSelectElement>("agent-select").value = "frequency";
	el("start-session").click();
	await until(() => !el("draft").hidden, "session start");
	const sessionId = window.location.hash.replace("#/session/", "");
	expect(sessionId).toMatch(/^[0-9a-f]{32}$/);

	for (let pick = 0; pick < 45; pick++) {
		expect(el("pick-display").textContent).toBe(
			`Pack ${Math.floor(pick / 15) + 1}, Pick ${(pick % 15) + 1}`,
		);

		// enter a 3-card pack via the autocomplete dropdown
		const packNames = [0, 1, 2].map(
			(k) => allNames[(pick * 3 + k) % allNames.length],
		);
		for (const name of packNames) {
			input.value = name;
			input.dispatchEvent(new Event("input", { bubbles: true }));
			await until(
				() => root.querySelectorAll(".suggestion").length > 0,
				`suggestions for ${name}`,
			);
			const suggestion = root.querySelector(".suggestion") as HTMLElement;
			expect(suggestion.textContent).toBe(name);
			suggestion.dispatchEvent(new MouseEvent("mousedown", { bubbles: true }));
		}
		expect(root.querySelectorAll(".chip").length).toBe(3);

		const submit = el<HTMLButtonElement>("submit-pack");
		expect(submit.disabled).toBe(false);
		submit.click();
		await until(
			() => root.querySelectorAll(".recommendation-row").length === 3,
			`recommendations for pick ${pick + 1}`,
		);

		// zero divergence: the rendered rows equal a direct API call
		const expected = await api.recommend(sessionId, packNames);
		const rows = [...root.querySelectorAll(".recommendation-row")];
		expect(
			rows.map((row) => row.querySelector("td:nth-child(2)")!.textContent),
		).toEqual(expected.ranked.map((item) => item.name));
		expect(
			rows.map(
				(row) => row.querySelector(".adherence")!.getAttribute("data-adherent"),
			),
		).toEqual(expected.ranked.map((item) => String(item.adherent)));
		expect(
			rows.map((row) => row.querySelector("td:nth-child(3)")!.textContent),
		).toEqual(expected.ranked.map((item) => item.score.toFixed(3)));

		// confirm the preselected top recommendation
		el("confirm-pick").click();
		await until(
			() => el("pool-count").textContent === `(${pick + 1})`,
			`pool update after pick ${pick + 1}`,
		);

		// sidebar pass-through: counts and highlight match the server view
		const view = await api.getSession(sessionId);
		expect(view.picks_made).toBe(pick + 1);
		const cells = [...root.querySelectorAll(".color-cell")] as HTMLElement[];
		for (const cell of cells) {
			expect(Number(cell.dataset.count)).toBe(
				view.color_counts[cell.dataset.color!],
			);
			expect(cell.classList.contains("primary")).toBe(
				view.primary_pair.includes(cell.dataset.color!),
			);
		}
		const renderedPool = [...root.querySelectorAll("#pool li")].length;
		expect(renderedPool).toBe(view.pool.length);
	}

	// draft complete: banner up, entry disabled, server agrees
	await until(() => !el("completion-banner").hidden, "completion banner");
	expect(el<HTMLButtonElement>("submit-pack").disabled).toBe(true);
	expect(input.disabled).toBe(true);
	const finalView = await api.getSession(sessionId);
	expect(finalView.complete).toBe(true);
	expect(finalView.picks_made).toBe(45);

	expect(consoleErrors).not.toHaveBeenCalled();
}, 180_000);
