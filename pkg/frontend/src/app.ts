import {
  createSession,
  fetchProducts,
  sendFeedback,
  sendMessage,
  type BotResponse,
} from "./api.ts";
import { botBubble, disableChips, errorBubble, userBubble } from "./components.ts";

const SESSION_KEY = "shopchat.session";

export interface App {
  root: HTMLElement;
  submit(text: string): Promise<void>;
  reset(): Promise<void>;
}

/** All rendering derives from BotResponse fields; the client adds no
 * business logic of its own. One message is in flight at a time. */
export function createApp(root: HTMLElement): App {
  root.innerHTML = `
    <header>
      <h1>shopchat</h1>
      <button type="button" id="new-chat">New chat</button>
    </header>
    <main id="thread"></main>
    <form id="composer">
      <input id="box" autocomplete="off" placeholder="Ask about products..." />
      <button id="send" type="submit" disabled>Send</button>
    </form>
  `;

  const thread = root.querySelector<HTMLElement>("#thread")!;
  const form = root.querySelector<HTMLFormElement>("#composer")!;
  const box = root.querySelector<HTMLInputElement>("#box")!;
  const send = root.querySelector<HTMLButtonElement>("#send")!;
  const newChat = root.querySelector<HTMLButtonElement>("#new-chat")!;

  let sessionId: string | null = window.localStorage.getItem(SESSION_KEY);
  let inFlight = false;
  let turnIndex = -1;

  function refreshComposer(): void {
    send.disabled = inFlight || box.value.trim().length === 0;
    box.disabled = inFlight;
  }

  async function ensureSession(): Promise<string> {
    if (!sessionId) {
      sessionId = await createSession();
      window.localStorage.setItem(SESSION_KEY, sessionId);
    }
    return sessionId;
  }

  function renderBot(response: BotResponse): void {
    const sid = sessionId!;
    const index = turnIndex;
    const cards = response.products ?? [];
    const bubble = botBubble(response, {
      onChip: (value, chip) => {
        if (chip.disabled) return;
        disableChips(bubble); // debounce: a chip row fires once
        void submit(value);
      },
      onFeedback: async (thumbs) => {
        try {
          await sendFeedback(sid, index, thumbs);
          return true;
        } catch {
          return false;
        }
      },
      hasMore: cards.length >= 8,
      loadAll: () => fetchProducts(sid, true),
    });
    thread.append(bubble);
    bubble.scrollIntoView?.({ block: "end" });
  }

  async function submit(text: string): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed || inFlight) return;
    inFlight = true;
    refreshComposer();
    disableChips(thread); // older suggestion chips no longer apply
    thread.append(userBubble(trimmed));
    try {
      const sid = await ensureSession();
      const response = await sendMessage(sid, trimmed);
      turnIndex += 1;
      renderBot(response);
    } catch (error) {
      thread.append(
        errorBubble(`Could not send: ${(error as Error).message}`, () => void submit(trimmed)),
      );
    } finally {
      inFlight = false;
      refreshComposer();
    }
  }

  async function reset(): Promise<void> {
    window.localStorage.removeItem(SESSION_KEY);
    sessionId = null;
    turnIndex = -1;
    thread.replaceChildren();
    box.value = "";
    refreshComposer();
  }

  box.addEventListener("input", refreshComposer);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = box.value;
    box.value = "";
    refreshComposer();
    void submit(text);
  });
  newChat.addEventListener("click", () => void reset());
  refreshComposer();

  return { root, submit, reset };
}
