/** DOM shell for the triage loop.
 *
 * Keyboard shortcuts map 1:1 to buttons:
 *   K           keep
 *   D           discard (opens the reason picker)
 *   1..9        pick a discard reason
 *   Enter       confirm discard
 *   Escape      cancel the reason picker
 */

import { Summary, TriageApiLike } from "./api.js";
import { TriageQueue } from "./queue.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function formatFraction(fraction: number | null): string {
  if (fraction === null) return "n/a";
  const pct = fraction * 100;
  if (pct > 0 && pct < 1) return `${pct.toFixed(1)}%`;
  return `${Math.round(pct)}%`;
}

export class TriageApp {
  readonly queue: TriageQueue;
  private root: HTMLElement;
  private reasonMode = false;
  private selectedReason = "";
  private reasons: string[] = [];
  private toastMessage: string | null = null;
  private offlineCount = 0;
  private keyHandler = (event: KeyboardEvent) => this.onKey(event);

  constructor(root: HTMLElement, private api: TriageApiLike) {
    this.root = root;
    this.queue = new TriageQueue(api);
    this.queue.onEvent((event) => {
      if (event.kind === "toast") this.toastMessage = event.message;
      if (event.kind === "offline") this.offlineCount = event.buffered;
      if (event.kind === "online") this.offlineCount = 0;
      this.render();
    });
    document.addEventListener("keydown", this.keyHandler);
  }

  async start(): Promise<void> {
    await this.queue.start();
    this.reasons = this.queue.summary?.reasons ?? [];
    this.render();
  }

  destroy(): void {
    document.removeEventListener("keydown", this.keyHandler);
  }

  keep(): void {
    if (this.queue.decide("keep")) {
      this.exitReasonMode();
      this.toastMessage = null;
    }
  }

  openDiscard(): void {
    if (!this.queue.current) return;
    this.reasonMode = true;
    this.selectedReason = "";
    this.render();
  }

  pickReason(reason: string): void {
    this.selectedReason = reason;
    this.render();
  }

  confirmDiscard(): void {
    if (!this.reasonMode) return;
    if (!this.selectedReason) {
      this.toastMessage = "pick a discard reason first";
      this.render();
      return;
    }
    if (this.queue.decide("discard", this.selectedReason)) {
      this.exitReasonMode();
      this.toastMessage = null;
    }
  }

  private exitReasonMode(): void {
    this.reasonMode = false;
    this.selectedReason = "";
  }

  private onKey(event: KeyboardEvent): void {
    if (event.ctrlKey || event.metaKey || event.altKey) return;
    const target = event.target as HTMLElement | null;
    if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) {
      if (event.key !== "Enter" && event.key !== "Escape") return;
    }
    const key = event.key.toLowerCase();
    if (key === "k") {
      event.preventDefault();
      this.keep();
    } else if (key === "d") {
      event.preventDefault();
      this.openDiscard();
    } else if (this.reasonMode && /^[1-9]$/.test(key)) {
      const reason = this.reasons[Number(key) - 1];
      if (reason) {
        event.preventDefault();
        this.pickReason(reason);
      }
    } else if (this.reasonMode && key === "enter") {
      event.preventDefault();
      this.confirmDiscard();
    } else if (this.reasonMode && key === "escape") {
      event.preventDefault();
      this.exitReasonMode();
      this.render();
    }
  }

  render(): void {
    this.root.replaceChildren();
    this.root.append(this.renderHeader(), this.renderSummaryBar());

    if (this.queue.loadError !== null) {
      this.root.append(this.renderRetryBanner());
      return;
    }
    if (this.toastMessage) {
      this.root.append(el("div", "toast", this.toastMessage));
    }
    if (this.offlineCount > 0) {
      this.root.append(
        el("div", "banner-retry", `offline: ${this.offlineCount} decision(s) buffered for replay`),
      );
    }
    if (this.queue.done) {
      this.root.append(this.renderDoneState());
      return;
    }
    this.root.append(this.renderViewer());
    if (this.reasonMode) {
      this.root.append(this.renderReasonPanel());
    }
    this.root.append(this.renderShortcuts());
  }

  private renderHeader(): HTMLElement {
    const header = el("div", "triage-header");
    header.append(el("h1", undefined, "Muskox image triage"));
    const position = el("span", "queue-position");
    position.textContent = this.queue.done
      ? "queue empty"
      : `${this.queue.position} of ${this.queue.totalAtStart}`;
    header.append(position);
    return header;
  }

  private renderSummaryBar(): HTMLElement {
    const bar = el("div", "summary-bar");
    const summary: Summary | null = this.queue.summary;
    if (!summary) {
      bar.append(el("span", undefined, "summary unavailable"));
      return bar;
    }
    const o = summary.overall;
    bar.append(
      el("span", undefined, `generated ${o.generated}`),
      el("span", undefined, `kept ${o.kept}`),
      el("span", undefined, `discarded ${o.discarded}`),
      el("span", undefined, `pending ${o.pending}`),
      el("span", "frac", `keep rate ${formatFraction(o.fraction)}`),
    );
    return bar;
  }

  private renderRetryBanner(): HTMLElement {
    const banner = el("div", "banner-retry");
    banner.append(el("span", undefined, `cannot reach the triage service: ${this.queue.loadError}`));
    const retry = el("button", "btn-confirm", "Retry");
    retry.onclick = () => void this.start();
    banner.append(retry);
    return banner;
  }

  private renderDoneState(): HTMLElement {
    const done = el("div", "done-state");
    done.append(el("h2", undefined, "All caught up"));
    const o = this.queue.summary?.overall;
    done.append(
      el(
        "p",
        undefined,
        o
          ? `${o.kept} kept / ${o.generated} generated (${formatFraction(o.fraction)})`
          : "no pending images",
      ),
    );
    return done;
  }

  private renderViewer(): HTMLElement {
    const item = this.queue.current;
    const viewer = el("div", "viewer");
    if (!item) return viewer;
    const img = el("img");
    img.src = this.api.imageUrl(item.image_id);
    img.alt = `generated image ${item.image_id}`;
    viewer.append(img);
    viewer.append(el("div", "meta", `${item.image_id} — ${item.backend}`));

    const controls = el("div", "controls");
    const keepBtn = el("button", "btn-keep", "Keep (K)");
    keepBtn.dataset.action = "keep";
    keepBtn.onclick = () => this.keep();
    const discardBtn = el("button", "btn-discard", "Discard (D)");
    discardBtn.dataset.action = "discard";
    discardBtn.onclick = () => this.openDiscard();
    controls.append(keepBtn, discardBtn);
    viewer.append(controls);
    return viewer;
  }

  private renderReasonPanel(): HTMLElement {
    const panel = el("div", "reason-panel");
    panel.append(el("div", "hint", "why discard? (1-9 to pick, Enter to confirm, Esc to cancel)"));
    this.reasons.forEach((reason, index) => {
      const label = el("label");
      const radio = el("input") as HTMLInputElement;
      radio.type = "radio";
      radio.name = "reason";
      radio.value = reason;
      radio.checked = this.selectedReason === reason;
      radio.onchange = () => this.pickReason(reason);
      label.append(radio, document.createTextNode(` ${index + 1}. ${reason}`));
      panel.append(label);
    });
    const controls = el("div", "controls");
    const confirm = el("button", "btn-confirm", "Confirm discard (Enter)");
    confirm.dataset.action = "confirm-discard";
    confirm.disabled = this.selectedReason === "";
    confirm.onclick = () => this.confirmDiscard();
    const cancel = el("button", "btn-cancel", "Cancel (Esc)");
    cancel.onclick = () => {
      this.exitReasonMode();
      this.render();
    };
    controls.append(confirm, cancel);
    panel.append(controls);
    return panel;
  }

  private renderShortcuts(): HTMLElement {
    const bar = el("div", "shortcuts");
    bar.innerHTML =
      "<kbd>K</kbd> keep &nbsp; <kbd>D</kbd> discard &nbsp; " +
      "<kbd>1</kbd>–<kbd>9</kbd> reason &nbsp; <kbd>Enter</kbd> confirm &nbsp; <kbd>Esc</kbd> cancel";
    return bar;
  }
}
