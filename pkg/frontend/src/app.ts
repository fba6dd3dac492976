// Session controller: one in-flight mutation at a time, no optimistic
// updates. The screen always reflects the last report the server sent;
// a failed request keeps the previous screen and offers a retry.

import { ApiError, NetworkError, SessionApi } from "./api.js";
import { renderReport } from "./render.js";
import type { FactValue, Report, RetractionHint, Role } from "./types.js";

export class SessionView {
  report: Report | null = null;
  sessionId: string | null = null;
  busy = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: SessionApi,
  ) {}

  async start(kbText: string): Promise<void> {
    const created = await this.api.createSession(kbText);
    this.sessionId = created.id;
    this.report = created.report;
    this.rerender();
  }

  rerender(): void {
    if (!this.report) return;
    this.root.classList.toggle("busy", this.busy);
    renderReport(this.root, this.report, {
      onEnter: (symbol, value, role) => void this.submit(symbol, value, role),
      onVerify: (symbol, value) => void this.submit(symbol, value, "observation"),
      onRetract: (symbol) => void this.retract(symbol),
    });
  }

  async submit(symbol: string, value: FactValue, role: Role): Promise<void> {
    await this.mutate(
      () => this.api.postFact(this.sessionId!, symbol, value, role),
      () => void this.submit(symbol, value, role),
      (error) => {
        if (error.code === "blocked" && role === "observation" && error.hints.length) {
          this.openBlockedDialog(symbol, value, error.hints);
        } else {
          this.showToast(error.message);
        }
      },
    );
  }

  async retract(symbol: string): Promise<void> {
    await this.mutate(
      () => this.api.deleteFact(this.sessionId!, symbol),
      () => void this.retract(symbol),
      (error) => this.showToast(error.message),
    );
  }

  private async mutate(
    action: () => Promise<Report>,
    retry: () => void,
    onApiError: (error: ApiError) => void,
  ): Promise<void> {
    if (this.busy || !this.sessionId) return;
    this.busy = true;
    this.root.classList.add("busy");
    try {
      this.report = await action();
      this.busy = false;
      this.rerender();
    } catch (error) {
      this.busy = false;
      this.root.classList.remove("busy");
      if (error instanceof NetworkError) {
        this.showToast("Connection failed; the last state is still shown.", retry);
      } else if (error instanceof ApiError) {
        onApiError(error);
      } else {
        throw error;
      }
    }
  }

  /** Lists the minimal decision sets whose retraction lets the observation in;
      choosing one retracts those decisions and retries the observation. */
  private openBlockedDialog(symbol: string, value: FactValue, hints: RetractionHint[]): void {
    this.closeDialog();
    const dialog = document.createElement("div");
    dialog.className = "blocked-dialog";
    dialog.setAttribute("role", "dialog");

    const text = document.createElement("p");
    text.className = "blocked-message";
    text.textContent =
      `The observation ${symbol} = ${String(value)} contradicts your current ` +
      "decisions. Retract one of the following to record it:";
    dialog.appendChild(text);

    for (const hint of hints) {
      const button = document.createElement("button");
      button.className = "hint";
      button.textContent =
        "retract " + hint.map((f) => `${f.symbol} = ${String(f.value)}`).join(", ");
      button.addEventListener("click", () => {
        this.closeDialog();
        void this.applyHint(hint, symbol, value);
      });
      dialog.appendChild(button);
    }

    const cancel = document.createElement("button");
    cancel.className = "cancel";
    cancel.textContent = "keep my decisions";
    cancel.addEventListener("click", () => this.closeDialog());
    dialog.appendChild(cancel);

    this.root.appendChild(dialog);
  }

  private closeDialog(): void {
    this.root.querySelector(".blocked-dialog")?.remove();
  }

  private async applyHint(hint: RetractionHint, symbol: string, value: FactValue): Promise<void> {
    for (const fact of hint) {
      await this.mutate(
        () => this.api.deleteFact(this.sessionId!, fact.symbol),
        () => void this.applyHint(hint, symbol, value),
        (error) => this.showToast(error.message),
      );
    }
    await this.submit(symbol, value, "observation");
  }

  private showToast(message: string, retry?: () => void): void {
    this.root.querySelector(".toast")?.remove();
    const toast = document.createElement("div");
    toast.className = "toast";
    toast.setAttribute("role", "status");
    const text = document.createElement("span");
    text.textContent = message;
    toast.appendChild(text);
    if (retry) {
      const button = document.createElement("button");
      button.className = "retry";
      button.textContent = "retry";
      button.addEventListener("click", () => {
        toast.remove();
        retry();
      });
      toast.appendChild(button);
    }
    const close = document.createElement("button");
    close.className = "dismiss";
    close.textContent = "dismiss";
    close.addEventListener("click", () => toast.remove());
    toast.appendChild(close);
    this.root.appendChild(toast);
  }
}
