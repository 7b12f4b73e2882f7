// Render helpers. Pure pass-through: these paint server fields into the
// DOM and attach callbacks; they derive nothing beyond display text.

import type { Recommendation, SessionView } from "./types.js";

const COLOR_ORDER = ["W", "U", "B", "R", "G"] as const;
const COLOR_LABELS: Record<string, string> = {
	W: "White",
	U: "Blue",
	B: "Black",
	R: "Red",
	G: "Green",
	multicolor: "Multicolor",
	colorless: "Colorless",
};

export function pickDisplay(picksMade: number): string {
	// 15 picks per pack, three packs; purely presentational
	const pack = Math.floor(picksMade / 15) + 1;
	const pick = (picksMade % 15) + 1;
	return `Pack ${Math.min(pack, 3)}, Pick ${pick}`;
}

export function renderColorBar(view: SessionView, el: HTMLElement): void {
	el.innerHTML = "";
	const total = Math.max(
		1,
		...COLOR_ORDER.map((c) => view.color_counts[c] ?? 0),
	);
	for (const color of COLOR_ORDER) {
		const count = view.color_counts[color] ?? 0;
		const cell = document.createElement("div");
		cell.className = "color-cell";
		if (view.primary_pair.includes(color)) cell.classList.add("primary");
		cell.dataset.color = color;
		cell.dataset.count = String(count);

		const bar = document.createElement("div");
		bar.className = `color-bar color-${color}`;
		bar.style.height = `${(count / total) * 48 + 2}px`;
		const label = document.createElement("span");
		label.textContent = `${color} ${count}`;
		cell.append(bar, label);
		el.appendChild(cell);
	}
}

export function renderPool(view: SessionView, el: HTMLElement): void {
	el.innerHTML = "";
	if (view.pool.length === 0) {
		const empty = document.createElement("p");
		empty.className = "pool-empty";
		empty.textContent = "(empty)";
		el.appendChild(empty);
		return;
	}
	for (const [group, names] of Object.entries(view.pool_grouped)) {
		if (!names.length) continue;
		const heading = document.createElement("h4");
		heading.textContent = `${COLOR_LABELS[group] ?? group} (${names.length})`;
		const list = document.createElement("ul");
		list.dataset.group = group;
		for (const name of names) {
			const item = document.createElement("li");
			item.textContent = name;
			list.appendChild(item);
		}
		el.append(heading, list);
	}
}

export function renderRecommendations(
	recommendation: Recommendation,
	el: HTMLElement,
	onSelect: (name: string) => void,
): void {
	el.innerHTML = "";
	const caption = document.createElement("p");
	caption.className = "agent-id";
	caption.textContent = `ranked by ${recommendation.agent_id}`;
	el.appendChild(caption);

	const table = document.createElement("table");
	table.className = "recommendations";
	recommendation.ranked.forEach((item, index) => {
		const row = document.createElement("tr");
		row.className = "recommendation-row";
		if (index === 0) row.classList.add("top-choice");
		row.dataset.name = item.name;

		const rank = document.createElement("td");
		rank.textContent = String(index + 1);
		const name = document.createElement("td");
		name.textContent = item.name;
		const score = document.createElement("td");
		score.textContent = item.score.toFixed(3);
		const badge = document.createElement("td");
		badge.className = "adherence";
		// displays the server's adherent flag verbatim
		badge.textContent = item.adherent ? "on-color" : "off-color";
		badge.dataset.adherent = String(item.adherent);

		row.append(rank, name, score, badge);
		row.addEventListener("click", () => onSelect(item.name));
		table.appendChild(row);
	});
	el.appendChild(table);
}

export function renderChips(
	names: string[],
	el: HTMLElement,
	onRemove: (index: number) => void,
): void {
	el.innerHTML = "";
	names.forEach((name, index) => {
		const chip = document.createElement("span");
		chip.className = "chip";
		chip.textContent = name;
		const remove = document.createElement("button");
		remove.type = "button";
		remove.className = "chip-remove";
		remove.textContent = "×";
		remove.addEventListener("click", () => onRemove(index));
		chip.appendChild(remove);
		el.appendChild(chip);
	});
}

export function renderSuggestions(
	names: string[],
	el: HTMLElement,
	onPick: (name: string) => void,
): void {
	el.innerHTML = "";
	el.hidden = names.length === 0;
	for (const name of names) {
		const item = document.createElement("div");
		item.className = "suggestion";
		item.textContent = name;
		item.addEventListener("mousedown", (event) => {
			event.preventDefault();
			onPick(name);
		});
		el.appendChild(item);
	}
}
