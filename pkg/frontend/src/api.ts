// Thin HTTP client. The UI never computes rankings, adherence, or color
// profiles itself; every displayed value comes back from these calls.

import type { PickSummary, Recommendation, SessionView } from "./types.js";

export class ApiError extends Error {
	constructor(
		public status: number,
		public code: string,
		message: string,
	) {
		super(message);
	}
}

async function parseError(response: Response): Promise<ApiError> {
	let code = "Error";
	let message = `HTTP ${response.status}`;
	try {
		const body = await response.json();
		if (body?.error) {
			code = body.error.code ?? code;
			message = body.error.message ?? message;
		} else if (body?.detail) {
			message = JSON.stringify(body.detail);
		}
	} catch {
		// non-JSON error body; keep the status text
	}
	return new ApiError(response.status, code, message);
}

export class ApiClient {
	constructor(private baseUrl: string = "") {}

	private async request<T>(path: string, init?: RequestInit): Promise<T> {
		const response = await fetch(this.baseUrl + path, {
			headers: { "content-type": "application/json" },
			...init,
		});
		if (!response.ok) throw await parseError(response);
		return (await response.json()) as T;
	}

	health(): Promise<{ status: string; sets: string[] }> {
		return this.request("/healthz");
	}

	async createSession(setCode: string, agent: string): Promise<string> {
		const body = await this.request<{ session_id: string }>("/v1/sessions", {
			method: "POST",
			body: JSON.stringify({ set_code: setCode, agent }),
		});
		return body.session_id;
	}

	getSession(sessionId: string): Promise<SessionView> {
		return this.request(`/v1/sessions/${sessionId}`);
	}

	recommend(sessionId: string, pack: string[]): Promise<Recommendation> {
		return this.request(`/v1/sessions/${sessionId}/recommend`, {
			method: "POST",
			body: JSON.stringify({ pack }),
		});
	}

	recordPick(
		sessionId: string,
		card: string,
		pack: string[],
	): Promise<PickSummary> {
		return this.request(`/v1/sessions/${sessionId}/picks`, {
			method: "POST",
			body: JSON.stringify({ card, pack }),
		});
	}

	async autocomplete(setCode: string, query: string): Promise<string[]> {
		const params = new URLSearchParams({ set: setCode, q: query });
		const body = await this.request<{ names: string[] }>(
			`/v1/cards?${params}`,
		);
		return body.names;
	}
}
