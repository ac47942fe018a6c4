// Transcript state as an append/replace event log.
//
// The transcript is a sequence of closed words plus one open word being
// written.  Accepting a recognition candidate appends its code points to the
// open word; picking an intellisense suggestion replaces the open word with a
// lexicon word; a separator closes the word.  The visible state is a pure
// fold over the events, so it can always be reconstructed from the log.

export type TranscriptEvent =
  | { kind: "append"; text: string }
  | { kind: "replace"; word: string }
  | { kind: "close" };

export interface TranscriptState {
  closed: string[];
  open: string;
}

export function replay(events: readonly TranscriptEvent[]): TranscriptState {
  const closed: string[] = [];
  let open = "";
  for (const event of events) {
    if (event.kind === "append") {
      open += event.text;
    } else if (event.kind === "replace") {
      closed.push(event.word);
      open = "";
    } else if (open.length > 0) {
      closed.push(open);
      open = "";
    }
  }
  return { closed, open };
}

export class Transcript {
  readonly events: TranscriptEvent[] = [];

  private get state(): TranscriptState {
    return replay(this.events);
  }

  get openWord(): string {
    return this.state.open;
  }

  get closedWords(): readonly string[] {
    return this.state.closed;
  }

  get text(): string {
    const { closed, open } = this.state;
    return [...closed, ...(open ? [open] : [])].join(" ");
  }

  appendSymbol(codepoints: string): void {
    this.events.push({ kind: "append", text: codepoints });
  }

  replaceOpenWord(word: string): void {
    this.events.push({ kind: "replace", word });
  }

  closeWord(): void {
    this.events.push({ kind: "close" });
  }
}
