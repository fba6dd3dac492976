// Page bootstrap: paste a knowledge base, start a session, interact.

import { SessionApi } from "./api.js";
import { SessionView } from "./app.js";

function bootstrap(): void {
  const textarea = document.getElementById("kb-input") as HTMLTextAreaElement;
  const startButton = document.getElementById("start-session") as HTMLButtonElement;
  const appRoot = document.getElementById("app") as HTMLElement;
  const setup = document.getElementById("setup") as HTMLElement;

  const api = new SessionApi("");
  const view = new SessionView(appRoot, api);

  startButton.addEventListener("click", () => {
    void view
      .start(textarea.value)
      .then(() => setup.classList.add("hidden"))
      .catch((error: unknown) => {
        const message = document.getElementById("setup-error") as HTMLElement;
        message.textContent = error instanceof Error ? error.message : String(error);
      });
  });
}

document.addEventListener("DOMContentLoaded", bootstrap);
