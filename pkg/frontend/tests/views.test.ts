// Contract tests: rendering is pure pass-through of server fields. The
// fixtures below deliberately carry flags a client-side recomputation would
// "correct" (an off-color top pick, a primary pair that is not the two
// biggest bars); the DOM must show the server's values anyway.

import { beforeEach, describe, expect, it } from "vitest";

import type { Recommendation, SessionView } from "../src/types.js";
import {
	pickDisplay,
	renderColorBar,
	renderPool,
	renderRecommendations,
} from "../src/views.js";

function sessionFixture(overrides: Partial<SessionView> = {}): SessionView {
	return {
		session_id: "abc123",
		set_code: "NEO",
		agent: "frequency",
		created_at: 0,
		picks_made: 3,
		pool: ["Alpha", "Beta", "Gamma"],
		pool_grouped: {
			W: ["Alpha"],
			U: [],
			B: [],
			R: ["Beta"],
			G: [],
			multicolor: [],
			colorless: ["Gamma"],
		},
		pick_history: [],
		color_counts: { W: 1, U: 0, B: 0, R: 1, G: 0 },
		primary_pair: ["W", "R"],
		complete: false,
		...overrides,
	};
}

let container: HTMLElement;

beforeEach(() => {
	container = document.createElement("div");
	document.body.replaceChildren(container);
});

describe("pickDisplay", () => {
	it("formats pack and pick from picks_made", () => {
		expect(pickDisplay(0)).toBe("Pack 1, Pick 1");
		expect(pickDisplay(14)).toBe("Pack 1, Pick 15");
		expect(pickDisplay(15)).toBe("Pack 2, Pick 1");
		expect(pickDisplay(44)).toBe("Pack 3, Pick 15");
	});
});

describe("renderRecommendations", () => {
	const recommendation: Recommendation = {
		agent_id: "frequency",
		prompt_used: null,
		ranked: [
			// server says the top choice is off-color; client must not fix it
			{ name: "Zed Card", score: 0.91, adherent: false },
			{ name: "Abc Card", score: 0.4, adherent: true },
		],
	};

	it("shows rows in server order with server scores and badges", () => {
		renderRecommendations(recommendation, container, () => undefined);
		const rows = [...container.querySelectorAll(".recommendation-row")];
		expect(rows.map((r) => r.querySelector("td:nth-child(2)")!.textContent)).toEqual([
			"Zed Card",
			"Abc Card",
		]);
		const badges = [...container.querySelectorAll(".adherence")];
		expect(badges.map((b) => b.getAttribute("data-adherent"))).toEqual([
			"false",
			"true",
		]);
		expect(rows[0].classList.contains("top-choice")).toBe(true);
		expect(rows[0].querySelector("td:nth-child(3)")!.textContent).toBe("0.910");
	});

	it("clicking a row reports the server-ranked name", () => {
		let selected = "";
		renderRecommendations(recommendation, container, (name) => {
			selected = name;
		});
		(container.querySelectorAll(".recommendation-row")[1] as HTMLElement).click();
		expect(selected).toBe("Abc Card");
	});
});

describe("renderPool", () => {
	it("renders the server grouping verbatim", () => {
		renderPool(sessionFixture(), container);
		const groups = [...container.querySelectorAll("ul")].map(
			(ul) => ul.dataset.group,
		);
		expect(groups).toEqual(["W", "R", "colorless"]);
		expect(container.textContent).toContain("Colorless (1)");
	});

	it("empty pool shows the placeholder", () => {
		renderPool(
			sessionFixture({ pool: [], pool_grouped: { W: [], U: [], B: [], R: [], G: [], multicolor: [], colorless: [] } }),
			container,
		);
		expect(container.querySelector(".pool-empty")!.textContent).toBe("(empty)");
	});
});

describe("renderColorBar", () => {
	it("highlights exactly the server primary pair", () => {
		// primary pair deliberately disagrees with the biggest counts: the
		// client must highlight what the server said, not recompute it
		const view = sessionFixture({
			color_counts: { W: 0, U: 5, B: 4, R: 0, G: 0 },
			primary_pair: ["W", "R"],
		});
		renderColorBar(view, container);
		const primaries = [...container.querySelectorAll(".color-cell.primary")].map(
			(cell) => (cell as HTMLElement).dataset.color,
		);
		expect(primaries).toEqual(["W", "R"]);
	});

	it("shows a count per color", () => {
		renderColorBar(sessionFixture(), container);
		const counts = [...container.querySelectorAll(".color-cell")].map(
			(cell) => (cell as HTMLElement).dataset.count,
		);
		expect(counts).toEqual(["1", "0", "0", "1", "0"]);
	});
});
