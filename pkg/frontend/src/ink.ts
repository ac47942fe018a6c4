// Ink capture state: strokes accumulate from pointer samples until the buffer
// is sent for recognition and cleared by a committed candidate.

export interface InkPoint {
  x: number;
  y: number;
  t: number;
}

export class InkBuffer {
  private completed: InkPoint[][] = [];
  private current: InkPoint[] | null = null;

  get strokeCount(): number {
    return this.completed.length;
  }

  get isEmpty(): boolean {
    return this.completed.length === 0;
  }

  get isDrawing(): boolean {
    return this.current !== null;
  }

  beginStroke(x: number, y: number, t: number): void {
    if (this.current !== null) {
      this.endStroke();
    }
    this.current = [{ x, y, t }];
  }

  addPoint(x: number, y: number, t: number): void {
    if (this.current === null) {
      return;
    }
    const last = this.current[this.current.length - 1];
    // pointer timestamps occasionally repeat; keep the sequence monotone
    this.current.push({ x, y, t: Math.max(t, last.t) });
  }

  /** Close the open stroke; single-point taps are discarded. */
  endStroke(): InkPoint[] | null {
    const stroke = this.current;
    this.current = null;
    if (stroke === null || stroke.length < 2) {
      return null;
    }
    this.completed.push(stroke);
    return stroke;
  }

  strokes(): readonly InkPoint[][] {
    return this.completed;
  }

  /** Wire shape for POST /recognize: per-stroke [x, y, t] triples. */
  toPayload(): number[][][] {
    return this.completed.map((stroke) => stroke.map((p) => [p.x, p.y, p.t]));
  }

  clear(): void {
    this.completed = [];
    this.current = null;
  }
}
