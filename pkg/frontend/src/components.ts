import type { BotResponse, ProductCard } from "./api.ts";

const INITIAL_CARD_LIMIT = 8;
const EXPANDED_CARD_LIMIT = 24;

export function userBubble(text: string): HTMLElement {
  const row = document.createElement("article");
  row.className = "msg user";
  const body = document.createElement("p");
  body.textContent = text;
  row.append(body);
  return row;
}

export function errorBubble(message: string, onRetry: () => void): HTMLElement {
  const row = document.createElement("article");
  row.className = "msg error";
  const body = document.createElement("p");
  body.textContent = message;
  const retry = document.createElement("button");
  retry.type = "button";
  retry.className = "retry";
  retry.textContent = "Retry";
  retry.addEventListener("click", onRetry);
  row.append(body, retry);
  return row;
}

function cardElement(card: ProductCard): HTMLElement {
  const element = document.createElement("div");
  element.className = "card";
  const title = document.createElement("strong");
  title.textContent = card.title;
  const price = document.createElement("span");
  price.className = "price";
  price.textContent = `₹${card.price.toLocaleString("en-IN")}`;
  element.append(title, price);
  for (const highlight of card.spec_highlights) {
    const line = document.createElement("small");
    line.textContent = highlight;
    element.append(line);
  }
  return element;
}

export interface BotBubbleHooks {
  onChip: (value: string, chip: HTMLButtonElement) => void;
  onFeedback: (thumbs: "up" | "down") => Promise<boolean>;
  // Resolves with the full product list when "View More" is pressed.
  loadAll?: () => Promise<ProductCard[]>;
  hasMore?: boolean;
}

function renderCardGrid(grid: HTMLElement, cards: ProductCard[], limit: number): void {
  grid.replaceChildren(...cards.slice(0, limit).map(cardElement));
  grid.dataset.count = String(Math.min(cards.length, limit));
}

function feedbackBar(onFeedback: BotBubbleHooks["onFeedback"]): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "feedback";
  const state: { current: "up" | "down" | null } = { current: null };

  const buttons: Record<"up" | "down", HTMLButtonElement> = {
    up: document.createElement("button"),
    down: document.createElement("button"),
  };
  for (const thumbs of ["up", "down"] as const) {
    const button = buttons[thumbs];
    button.type = "button";
    button.className = `thumbs ${thumbs}`;
    button.textContent = thumbs === "up" ? "👍" : "👎";
    button.setAttribute("aria-pressed", "false");
    button.addEventListener("click", async () => {
      const previous = state.current;
      state.current = thumbs;
      paint();
      const ok = await onFeedback(thumbs);
      if (!ok) {
        state.current = previous; // revert on API failure
        paint();
      }
    });
    bar.append(button);
  }

  function paint(): void {
    for (const thumbs of ["up", "down"] as const) {
      buttons[thumbs].setAttribute("aria-pressed", String(state.current === thumbs));
      buttons[thumbs].classList.toggle("active", state.current === thumbs);
    }
    bar.dataset.feedback = state.current ?? "";
  }

  return bar;
}

export function botBubble(response: BotResponse, hooks: BotBubbleHooks): HTMLElement {
  const row = document.createElement("article");
  row.className = `msg bot kind-${response.kind}`;

  const body = document.createElement("p");
  body.textContent = response.text;
  row.append(body);

  const cards = response.products ?? [];
  if (cards.length > 0) {
    const grid = document.createElement("div");
    grid.className = "cards";
    renderCardGrid(grid, cards, INITIAL_CARD_LIMIT);
    row.append(grid);

    if (hooks.hasMore && hooks.loadAll) {
      const toggle = document.createElement("button");
      toggle.type = "button";
      toggle.className = "view-more";
      toggle.textContent = "View More";
      let expanded = false;
      toggle.addEventListener("click", async () => {
        if (expanded) {
          renderCardGrid(grid, cards, INITIAL_CARD_LIMIT);
          expanded = false;
          toggle.textContent = "View More";
          return;
        }
        try {
          const all = await hooks.loadAll!();
          renderCardGrid(grid, all, EXPANDED_CARD_LIMIT);
          expanded = true;
          toggle.textContent = "View Less";
        } catch {
          // fetch failure: keep the initial 8 visible
        }
      });
      row.append(toggle);
    }
  }

  if (response.follow_up && response.follow_up.suggestions.length > 0) {
    const chips = document.createElement("div");
    chips.className = "chips";
    for (const value of response.follow_up.suggestions) {
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className = "chip";
      chip.textContent = value;
      chip.addEventListener("click", () => hooks.onChip(value, chip));
      chips.append(chip);
    }
    row.append(chips);
  }

  row.append(feedbackBar(hooks.onFeedback));
  return row;
}

export function disableChips(scope: HTMLElement): void {
  for (const chip of scope.querySelectorAll<HTMLButtonElement>("button.chip")) {
    chip.disabled = true;
  }
}
