const DEFAULT_BASE_URL = "http://127.0.0.1:8000";

export const API_BASE_URL: string =
  (import.meta as { env?: Record<string, string> }).env?.VITE_API_BASE_URL || DEFAULT_BASE_URL;

export interface ProductCard {
  id: string;
  title: string;
  price: number;
  spec_highlights: string[];
}

export interface FollowUp {
  question: string;
  facet: string;
  suggestions: string[];
}

export interface BotResponse {
  kind: "products" | "answer" | "followup" | "comparison" | "summary" | "template" | "error";
  text: string;
  products: ProductCard[] | null;
  follow_up: FollowUp | null;
  flags: Record<string, boolean>;
}

export class ApiError extends Error {
  constructor(message: string, public readonly status?: number) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${API_BASE_URL}${path}`, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
  } catch (error) {
    throw new ApiError(`network error: ${String(error)}`);
  }
  if (!response.ok) {
    throw new ApiError(`request failed with status ${response.status}`, response.status);
  }
  return (await response.json()) as T;
}

export async function createSession(): Promise<string> {
  const body = await request<{ session_id: string }>("/sessions", { method: "POST" });
  return body.session_id;
}

export async function sendMessage(sessionId: string, text: string): Promise<BotResponse> {
  return request<BotResponse>(`/sessions/${sessionId}/messages`, {
    method: "POST",
    body: JSON.stringify({ text }),
  });
}

export async function fetchProducts(sessionId: string, all: boolean): Promise<ProductCard[]> {
  const query = all ? "?all=true" : "";
  const body = await request<{ products: ProductCard[] }>(`/sessions/${sessionId}/products${query}`);
  return body.products;
}

export async function sendFeedback(
  sessionId: string,
  turnIndex: number,
  thumbs: "up" | "down",
): Promise<void> {
  await request(`/sessions/${sessionId}/turns/${turnIndex}/feedback`, {
    method: "POST",
    body: JSON.stringify({ thumbs }),
  });
}
