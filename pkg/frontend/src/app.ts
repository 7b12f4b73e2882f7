// Draft companion single-page app. Session routing lives in the URL hash
// (#/session/<id>) so a draft survives refresh; the UI serializes its own
// requests and discards stale recommendation responses by sequence number.

import { ApiClient, ApiError } from "./api.js";
import type { Recommendation, SessionView } from "./types.js";
import {
	pickDisplay,
	renderChips,
	renderColorBar,
	renderPool,
	renderRecommendations,
	renderSuggestions,
} from "./views.js";

interface AppState {
	sessionId: string | null;
	view: SessionView | null;
	packEntries: string[];
	recommendation: Recommendation | null;
	selectedCard: string | null;
	recommendSeq: number;
	busy: boolean;
}

export function mountApp(root: HTMLElement, api: ApiClient): AppState {
	const state: AppState = {
		sessionId: null,
		view: null,
		packEntries: [],
		recommendation: null,
		selectedCard: null,
		recommendSeq: 0,
		busy: false,
	};

	root.innerHTML = `
	  <header><h1>Draft Companion</h1><p id="status"></p></header>
	  <section id="setup">
	    <label>Set <input id="set-code" value="NEO" size="6"></label>
	    <label>Agent
	      <select id="agent-select">
	        <option value="greedy">color greedy</option>
	        <option value="frequency">pick frequency</option>
	        <option value="random">random</option>
	        <option value="llm">llm</option>
	      </select>
	    </label>
	    <button id="start-session" type="button">Start draft</button>
	  </section>
	  <main id="draft" hidden>
	    <section id="left">
	      <h2 id="pick-display"></h2>
	      <div id="completion-banner" class="banner" hidden>Draft complete</div>
	      <div id="pack-entry">
	        <input id="card-input" placeholder="type a card name" autocomplete="off">
	        <div id="suggestions" class="dropdown" hidden></div>
	        <div id="chips"></div>
	        <button id="submit-pack" type="button" disabled>Get recommendations</button>
	      </div>
	      <div id="recommendations"></div>
	      <div id="confirm-area" hidden>
	        <span id="selected-label"></span>
	        <button id="confirm-pick" type="button">Confirm pick</button>
	      </div>
	    </section>
	    <aside id="sidebar">
	      <h3>Colors</h3>
	      <div id="color-bar" class="color-bar-row"></div>
	      <h3>Pool <span id="pool-count"></span></h3>
	      <div id="pool"></div>
	    </aside>
	  </main>
	`;

	const el = (id: string) => root.querySelector<HTMLElement>(`#${id}`)!;
	const input = el("card-input") as HTMLInputElement;
	const submit = el("submit-pack") as HTMLButtonElement;
	const confirmButton = el("confirm-pick") as HTMLButtonElement;

	function setStatus(text: string): void {
		el("status").textContent = text;
	}

	function syncPackForm(): void {
		renderChips(state.packEntries, el("chips"), (index) => {
			state.packEntries.splice(index, 1);
			syncPackForm();
		});
		const draftDone = state.view?.complete ?? false;
		submit.disabled = state.packEntries.length === 0 || draftDone;
		input.disabled = draftDone;
	}

	function syncSession(view: SessionView): void {
		state.view = view;
		el("draft").hidden = false;
		el("setup").hidden = true;
		el("pick-display").textContent = pickDisplay(view.picks_made);
		el("pool-count").textContent = `(${view.picks_made})`;
		el("completion-banner").hidden = !view.complete;
		renderColorBar(view, el("color-bar"));
		renderPool(view, el("pool"));
		syncPackForm();
	}

	async function refreshSession(): Promise<void> {
		if (!state.sessionId) return;
		syncSession(await api.getSession(state.sessionId));
	}

	async function startSession(): Promise<void> {
		const setCode = (el("set-code") as HTMLInputElement).value.trim();
		const agent = (el("agent-select") as HTMLSelectElement).value;
		try {
			state.sessionId = await api.createSession(setCode, agent);
			window.location.hash = `#/session/${state.sessionId}`;
			setStatus(`session ${state.sessionId.slice(0, 8)} (${agent})`);
			await refreshSession();
		} catch (error) {
			setStatus(error instanceof ApiError ? error.message : String(error));
		}
	}

	async function submitPack(): Promise<void> {
		if (!state.sessionId || state.packEntries.length === 0 || state.busy) return;
		const seq = ++state.recommendSeq;
		state.busy = true;
		setStatus("asking the agent…");
		try {
			const recommendation = await api.recommend(state.sessionId, [
				...state.packEntries,
			]);
			if (seq !== state.recommendSeq) return; // superseded by a newer pack
			state.recommendation = recommendation;
			state.selectedCard = recommendation.ranked[0]?.name ?? null;
			renderRecommendations(recommendation, el("recommendations"), (name) => {
				state.selectedCard = name;
				el("selected-label").textContent = `pick: ${name}`;
			});
			el("confirm-area").hidden = false;
			el("selected-label").textContent = `pick: ${state.selectedCard}`;
			setStatus("");
		} catch (error) {
			setStatus(error instanceof ApiError ? error.message : String(error));
		} finally {
			state.busy = false;
		}
	}

	async function confirmPick(): Promise<void> {
		if (!state.sessionId || !state.selectedCard) return;
		try {
			await api.recordPick(state.sessionId, state.selectedCard, [
				...state.packEntries,
			]);
			state.packEntries = [];
			state.recommendation = null;
			state.selectedCard = null;
			el("recommendations").innerHTML = "";
			el("confirm-area").hidden = true;
			input.value = "";
			await refreshSession();
			setStatus("");
		} catch (error) {
			setStatus(error instanceof ApiError ? error.message : String(error));
		}
	}

	let debounce: ReturnType<typeof setTimeout> | undefined;
	input.addEventListener("input", () => {
		if (debounce) clearTimeout(debounce);
		debounce = setTimeout(async () => {
			const query = input.value.trim();
			const setCode = state.view?.set_code ?? "NEO";
			if (!query) {
				renderSuggestions([], el("suggestions"), () => undefined);
				return;
			}
			try {
				const names = await api.autocomplete(setCode, query);
				renderSuggestions(names, el("suggestions"), (name) => {
					state.packEntries.push(name);
					input.value = "";
					renderSuggestions([], el("suggestions"), () => undefined);
					syncPackForm();
				});
			} catch {
				renderSuggestions([], el("suggestions"), () => undefined);
			}
		}, 80);
	});

	el("start-session").addEventListener("click", () => void startSession());
	submit.addEventListener("click", () => void submitPack());
	confirmButton.addEventListener("click", () => void confirmPick());

	const hashMatch = window.location.hash.match(/^#\/session\/([0-9a-f]+)$/);
	if (hashMatch) {
		state.sessionId = hashMatch[1];
		void refreshSession().catch((error) =>
			setStatus(error instanceof ApiError ? error.message : String(error)),
		);
	}

	return state;
}

declare global {
	interface Window {
		__draftkitMount?: typeof mountApp;
	}
}

if (typeof document !== "undefined" && document.getElementById("app-root")) {
	mountApp(document.getElementById("app-root")!, new ApiClient(""));
}
window.__draftkitMount = mountApp;
