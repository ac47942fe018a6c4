// Debounced single-flight task runner: recognition fires a fixed delay after
// the last pen-up, never runs concurrently with itself, and a poke during a
// run queues exactly one follow-up (which sees the latest buffer state).

export class DebouncedTask {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private queued = false;

  constructor(
    private readonly delayMs: number,
    private readonly task: () => Promise<void>,
  ) {}

  poke(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
    }
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire();
    }, this.delayMs);
  }

  cancel(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    this.queued = false;
  }

  private async fire(): Promise<void> {
    if (this.inFlight) {
      this.queued = true;
      return;
    }
    this.inFlight = true;
    try {
      await this.task();
    } finally {
      this.inFlight = false;
      if (this.queued) {
        this.queued = false;
        void this.fire();
      }
    }
  }
}
