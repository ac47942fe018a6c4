// DOM wiring: canvas capture, candidate/suggestion panels, conversion pane.

import { Candidate, ScribeApi, ServiceError } from "./api.js";
import { InkBuffer } from "./ink.js";
import { DebouncedTask } from "./scheduler.js";
import { Transcript } from "./transcript.js";

const RECOGNIZE_DEBOUNCE_MS = 300;
const TOP_N = 5;
const SUGGESTION_LIMIT = 8;

export interface AppElements {
  canvas: HTMLCanvasElement;
  candidates: HTMLElement;
  suggestions: HTMLElement;
  transcript: HTMLElement;
  oldScript: HTMLElement;
  newScript: HTMLElement;
  notes: HTMLElement;
  banner: HTMLElement;
  clearButton: HTMLElement;
  spaceButton: HTMLElement;
}

export class ScribeApp {
  private readonly buffer = new InkBuffer();
  private readonly transcript = new Transcript();
  private readonly recognizer: DebouncedTask;
  private readonly context: CanvasRenderingContext2D;

  constructor(private readonly api: ScribeApi, private readonly el: AppElements) {
    const context = el.canvas.getContext("2d");
    if (!context) {
      throw new Error("canvas 2d context unavailable");
    }
    this.context = context;
    this.recognizer = new DebouncedTask(RECOGNIZE_DEBOUNCE_MS, () => this.recognizeNow());
    this.bindPointerEvents();
    this.el.clearButton.addEventListener("click", () => this.clearInk());
    this.el.spaceButton.addEventListener("click", () => {
      this.transcript.closeWord();
      void this.refreshConversion();
    });
    this.resetCanvas();
  }

  private bindPointerEvents(): void {
    const canvas = this.el.canvas;
    canvas.addEventListener("pointerdown", (event) => {
      canvas.setPointerCapture(event.pointerId);
      const { x, y } = this.toCanvas(event);
      this.buffer.beginStroke(x, y, event.timeStamp);
      this.context.beginPath();
      this.context.moveTo(x, y);
    });
    canvas.addEventListener("pointermove", (event) => {
      if (!this.buffer.isDrawing) {
        return;
      }
      const { x, y } = this.toCanvas(event);
      this.buffer.addPoint(x, y, event.timeStamp);
      this.context.lineTo(x, y);
      this.context.stroke();
    });
    const finish = () => {
      if (!this.buffer.isDrawing) {
        return;
      }
      this.buffer.endStroke();
      this.redraw();
      if (!this.buffer.isEmpty) {
        this.recognizer.poke();
      }
    };
    canvas.addEventListener("pointerup", finish);
    canvas.addEventListener("pointercancel", finish);
  }

  private toCanvas(event: PointerEvent): { x: number; y: number } {
    const rect = this.el.canvas.getBoundingClientRect();
    // the service normalizes coordinates; raw canvas units are fine
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  }

  private resetCanvas(): void {
    const { width, height } = this.el.canvas;
    this.context.clearRect(0, 0, width, height);
    this.context.lineWidth = 2.5;
    this.context.lineCap = "round";
    this.context.lineJoin = "round";
    this.context.strokeStyle = "#1a237e";
  }

  private redraw(): void {
    this.resetCanvas();
    for (const stroke of this.buffer.strokes()) {
      this.context.beginPath();
      this.context.moveTo(stroke[0].x, stroke[0].y);
      for (const point of stroke.slice(1)) {
        this.context.lineTo(point.x, point.y);
      }
      this.context.stroke();
    }
  }

  private clearInk(): void {
    this.recognizer.cancel();
    this.buffer.clear();
    this.resetCanvas();
    this.el.candidates.replaceChildren();
  }

  private async recognizeNow(): Promise<void> {
    if (this.buffer.isEmpty) {
      return;
    }
    try {
      const response = await this.api.recognize(this.buffer.toPayload(), TOP_N);
      this.hideBanner();
      this.renderCandidates(response.candidates);
    } catch (error) {
      this.showBanner(error);
    }
  }

  private renderCandidates(candidates: Candidate[]): void {
    this.el.candidates.replaceChildren(
      ...candidates.map((candidate) => {
        const button = document.createElement("button");
        button.className = "candidate";
        button.title = `${candidate.class_id} (distance ${candidate.distance.toFixed(4)})`;
        const bar = document.createElement("span");
        bar.className = "confidence";
        bar.style.width = `${Math.round(candidate.confidence * 100)}%`;
        const label = document.createElement("span");
        label.className = "glyph";
        label.textContent = candidate.codepoints;
        button.append(bar, label);
        button.addEventListener("click", () => this.acceptCandidate(candidate));
        return button;
      }),
    );
  }

  private acceptCandidate(candidate: Candidate): void {
    this.transcript.appendSymbol(candidate.codepoints);
    this.clearInk();
    void this.refreshConversion();
  }

  private renderSuggestions(words: string[]): void {
    this.el.suggestions.replaceChildren(
      ...words.map((word) => {
        const button = document.createElement("button");
        button.className = "suggestion";
        button.textContent = word;
        button.addEventListener("click", () => {
          this.transcript.replaceOpenWord(word);
          void this.refreshConversion();
        });
        return button;
      }),
    );
  }

  private async refreshConversion(): Promise<void> {
    this.el.transcript.textContent = this.transcript.text;
    const openWord = this.transcript.openWord;
    if (!openWord) {
      this.el.oldScript.textContent = "";
      this.el.newScript.textContent = "";
      this.el.notes.textContent = "";
      this.renderSuggestions([]);
      return;
    }
    try {
      const converted = await this.api.convert(openWord);
      this.hideBanner();
      this.el.oldScript.textContent = converted.old_script;
      this.el.newScript.textContent = converted.new_script;
      this.el.notes.textContent = converted.notes.join("\n");
      const { words } = await this.api.suggest(converted.new_script, SUGGESTION_LIMIT);
      this.renderSuggestions(words);
    } catch (error) {
      this.showBanner(error);
    }
  }

  private showBanner(error: unknown): void {
    const message =
      error instanceof ServiceError
        ? `${error.code}: ${error.message}`
        : "service unreachable; ink preserved";
    this.el.banner.textContent = message;
    this.el.banner.classList.add("visible");
  }

  private hideBanner(): void {
    this.el.banner.classList.remove("visible");
  }
}
