// API payload shapes, mirroring the service's response models.

export interface SessionView {
	session_id: string;
	set_code: string;
	agent: string;
	created_at: number;
	picks_made: number;
	pool: string[];
	pool_grouped: Record<string, string[]>;
	pick_history: { pack: string[]; chosen: string }[];
	color_counts: Record<string, number>;
	primary_pair: string[];
	complete: boolean;
}

export interface RecommendationItem {
	name: string;
	score: number;
	adherent: boolean;
}

export interface Recommendation {
	ranked: RecommendationItem[];
	agent_id: string;
	prompt_used: string | null;
}

export interface PickSummary {
	pool_size: number;
	color_counts: Record<string, number>;
	primary_pair: string[];
}

export interface ApiErrorBody {
	error: { code: string; message: string };
}
