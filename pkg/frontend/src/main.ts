import { ScribeApi } from "./api.js";
import { AppElements, ScribeApp } from "./app.js";

const DEFAULT_SERVICE = "http://127.0.0.1:8765";

function requireElement<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) {
    throw new Error(`missing #${id}`);
  }
  return element as T;
}

const serviceUrl =
  new URLSearchParams(window.location.search).get("service") ?? DEFAULT_SERVICE;

const elements: AppElements = {
  canvas: requireElement<HTMLCanvasElement>("ink-canvas"),
  candidates: requireElement("candidates"),
  suggestions: requireElement("suggestions"),
  transcript: requireElement("transcript"),
  oldScript: requireElement("old-script"),
  newScript: requireElement("new-script"),
  notes: requireElement("notes"),
  banner: requireElement("banner"),
  clearButton: requireElement("clear-ink"),
  spaceButton: requireElement("close-word"),
};

new ScribeApp(new ScribeApi(serviceUrl), elements);
